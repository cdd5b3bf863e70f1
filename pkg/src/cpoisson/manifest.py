"""TOML manifests describing a chart, its structures and the checks to run.

Layout (top-level keys first, then tables)::

    name = "cstar"
    checks = ["jacobi", "riemann-poisson"]
    poisson = [["2i*z1*zb1"]]                     # n x n, coefficients B_jk
    hermitian = [["z1*zb1"]]                      # n x n, coefficients h_jk
    cotangent_metric = [["z1*zb1", "0"], ...]     # 2n x 2n over (dz.., dzb..)

    [chart]
    n = 1
    origin_excluded = true                        # or one flag per coordinate

    [symbols]                                     # optional; restricts names
    constants = ["c"]                             # conjugate partners implied
    functions = ["P"]

    [vector_fields.X]                             # components by coordinate
    z1 = "k*z1"

    [functions]
    f = "z1*zb1"

    [numeric]
    seed = 42
    samples = 20
    modulus = [0.5, 2.0]
    rtol = 1e-6

Every expression string goes through :func:`cpoisson.parser.parse`.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from cpoisson.expr import Expr, conjugate_name
from cpoisson.geometry import Bivector11, CotangentMetric, HermitianMetric, VectorField, basis_names
from cpoisson.parser import ParseError, parse

CHECKS = (
    "jacobi",
    "reality",
    "j-invariance",
    "poisson-field",
    "riemann-poisson",
    "connection-axioms",
    "prop42-equivalence",
    "hermitian",
    "kahler-triple",
    "closed",
)

# inputs each check needs besides the chart
REQUIRES = {
    "jacobi": ("poisson",),
    "reality": ("poisson",),
    "j-invariance": ("poisson",),
    "poisson-field": ("poisson", "vector_fields"),
    "riemann-poisson": ("poisson", "cotangent_metric"),
    "connection-axioms": ("poisson", "cotangent_metric"),
    "prop42-equivalence": ("poisson", "cotangent_metric"),
    "hermitian": ("hermitian",),
    "kahler-triple": ("hermitian",),
    "closed": ("hermitian",),
}


class ManifestError(ValueError):
    """Unreadable or invalid manifest; ``location`` names the offending key."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class NumericConfig:
    seed: int = 42
    samples: int = 20
    modulus: tuple[float, float] = (0.5, 2.0)
    rtol: float = 1e-6


@dataclass(frozen=True)
class Manifest:
    name: str
    n: int
    origin_excluded: tuple[bool, ...]
    checks: tuple[str, ...]
    constants: tuple[str, ...] = ()
    function_names: tuple[str, ...] = ()
    poisson: Bivector11 | None = None
    hermitian: HermitianMetric | None = None
    cotangent_metric: CotangentMetric | None = None
    vector_fields: dict[str, VectorField] = field(default_factory=dict)
    functions: dict[str, Expr] = field(default_factory=dict)
    numeric: NumericConfig = NumericConfig()
    source: str = ""

    def with_numeric(self, **changes) -> "Manifest":
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, numeric=replace(self.numeric, **changes))

    def expressions(self) -> list[Expr]:
        """Every input expression, used to pick values for free symbols."""
        out: list[Expr] = []
        if self.poisson is not None:
            out += [x for row in self.poisson.B for x in row]
        if self.hermitian is not None:
            out += [x for row in self.hermitian.H for x in row]
        if self.cotangent_metric is not None:
            out += [x for row in self.cotangent_metric.G for x in row]
        for X in self.vector_fields.values():
            out += list(X.components)
        out += list(self.functions.values())
        return out


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest: {exc.strerror or exc}", str(path)) from exc
    return loads(text, source=str(path))


def loads(text: str, source: str = "<string>") -> Manifest:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"invalid TOML: {exc}", source) from exc
    return _build(data, source)


def _expect(cond: bool, msg: str, loc: str):
    if not cond:
        raise ManifestError(msg, loc)


def _build(data: dict[str, Any], source: str) -> Manifest:
    known = {"name", "description", "checks", "poisson", "hermitian", "cotangent_metric", "chart", "symbols",
             "vector_fields", "functions", "numeric"}
    for key in data:
        _expect(key in known, "unknown key", key)

    chart = data.get("chart")
    _expect(isinstance(chart, dict), "missing [chart] table", "chart")
    n = chart.get("n")
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 1, "n must be a positive integer", "chart.n")
    flags = chart.get("origin_excluded", False)
    if isinstance(flags, bool):
        flags = [flags] * n
    _expect(
        isinstance(flags, list) and len(flags) == n and all(isinstance(f, bool) for f in flags),
        f"expected a boolean or {n} booleans",
        "chart.origin_excluded",
    )

    syms = data.get("symbols")
    allowed = None
    constants: tuple[str, ...] = ()
    fnames: tuple[str, ...] = ()
    if syms is not None:
        _expect(isinstance(syms, dict), "must be a table", "symbols")
        constants = tuple(_str_list(syms.get("constants", []), "symbols.constants"))
        fnames = tuple(_str_list(syms.get("functions", []), "symbols.functions"))
        allowed = set()
        for name in constants + fnames:
            try:
                allowed |= {name, conjugate_name(name)}
            except ValueError as exc:
                raise ManifestError(str(exc), "symbols") from exc

    def expr(s, loc: str) -> Expr:
        _expect(isinstance(s, str), "expression must be a string", loc)
        try:
            return parse(s, n, allowed)
        except ParseError as exc:
            raise ManifestError(str(exc), loc) from exc

    def matrix(key: str, size: int):
        rows = data.get(key)
        if rows is None:
            return None
        _expect(
            isinstance(rows, list) and len(rows) == size and all(isinstance(r, list) and len(r) == size for r in rows),
            f"shape mismatch: expected {size}x{size} for a chart of dimension {n}",
            key,
        )
        return tuple(tuple(expr(x, f"{key}[{i}][{j}]") for j, x in enumerate(r)) for i, r in enumerate(rows))

    poisson = hermitian = gstar = None
    B = matrix("poisson", n)
    if B is not None:
        poisson = Bivector11(B)
    H = matrix("hermitian", n)
    if H is not None:
        hermitian = HermitianMetric(H)
    G = matrix("cotangent_metric", 2 * n)
    if G is not None:
        try:
            gstar = CotangentMetric(G)
        except ValueError as exc:
            raise ManifestError(str(exc), "cotangent_metric") from exc

    fields = {}
    for name, comps in (data.get("vector_fields") or {}).items():
        loc = f"vector_fields.{name}"
        _expect(isinstance(comps, dict), "components must be a table keyed by coordinate", loc)
        parsed = {}
        for cname, s in comps.items():
            _expect(cname in basis_names(n), f"unknown coordinate {cname!r}", f"{loc}.{cname}")
            parsed[cname] = expr(s, f"{loc}.{cname}")
        fields[name] = VectorField.from_dict(n, parsed)

    funcs = {}
    for name, s in (data.get("functions") or {}).items():
        funcs[name] = expr(s, f"functions.{name}")

    checks = tuple(_str_list(data.get("checks", []), "checks"))
    present = {"poisson": poisson, "hermitian": hermitian, "cotangent_metric": gstar, "vector_fields": fields or None}
    for i, c in enumerate(checks):
        _expect(c in CHECKS, f"unknown check {c!r}; known: {', '.join(CHECKS)}", f"checks[{i}]")
        for need in REQUIRES[c]:
            _expect(present[need] is not None, f"check {c!r} requires {need!r}", f"checks[{i}]")

    num = data.get("numeric") or {}
    _expect(isinstance(num, dict), "must be a table", "numeric")
    for key in num:
        _expect(key in ("seed", "samples", "modulus", "rtol"), "unknown key", f"numeric.{key}")
    cfg = NumericConfig()
    seed = num.get("seed", cfg.seed)
    samples = num.get("samples", cfg.samples)
    modulus = num.get("modulus", list(cfg.modulus))
    rtol = num.get("rtol", cfg.rtol)
    _expect(isinstance(seed, int) and seed >= 0, "must be a non-negative integer", "numeric.seed")
    _expect(isinstance(samples, int) and samples >= 0, "must be a non-negative integer", "numeric.samples")
    _expect(
        isinstance(modulus, list) and len(modulus) == 2 and 0 < modulus[0] <= modulus[1],
        "expected [lo, hi] with 0 < lo <= hi",
        "numeric.modulus",
    )
    _expect(isinstance(rtol, (int, float)) and rtol > 0, "must be positive", "numeric.rtol")

    name = data.get("name", Path(source).stem)
    return Manifest(
        name=str(name),
        n=n,
        origin_excluded=tuple(flags),
        checks=checks,
        constants=constants,
        function_names=fnames,
        poisson=poisson,
        hermitian=hermitian,
        cotangent_metric=gstar,
        vector_fields=fields,
        functions=funcs,
        numeric=NumericConfig(seed, samples, (float(modulus[0]), float(modulus[1])), float(rtol)),
        source=source,
    )


def _str_list(v, loc: str) -> list[str]:
    _expect(isinstance(v, list) and all(isinstance(x, str) for x in v), "expected a list of strings", loc)
    return list(v)


def bundled_dir() -> Path:
    return Path(__file__).parent / "data"


def bundled(name: str) -> Path:
    """Path of a bundled manifest by stem, e.g. ``bundled("cstar")``."""
    p = bundled_dir() / f"{name}.toml"
    if not p.exists():
        raise ManifestError(f"no bundled manifest named {name!r}")
    return p


def bundled_names() -> list[str]:
    return sorted(p.stem for p in bundled_dir().glob("*.toml"))

"""Exact rational functions in the chart coordinates z_j and their conjugates zb_j.

Every scalar in the package is an :class:`Expr`: a quotient of two sparse
polynomials with Gaussian-rational coefficients.  The coordinates ``z_j`` and
``zb_j`` are independent indeterminates, so differentiation with respect to one
of them is the Wirtinger derivative and conjugation is a syntactic involution.

Symbol names follow fixed conventions, so no registry is needed:

* ``z1, z2, ...`` and ``zb1, zb2, ...`` are the chart coordinates;
* a name starting with a lowercase letter (``c``, ``k``, ``u3``) is a constant
  with zero derivative; its conjugate partner is ``name + "b"`` (``c`` and
  ``cb``), and a name ending in ``b`` is the partner of its stem;
* a name starting with an uppercase letter (``P``) is a generic smooth function
  of all coordinates.  Its partial derivatives are further symbols
  ``P_z1``, ``P_z1zb1``, ... so that zero testing stays decidable.

Polynomial arithmetic is delegated to sympy's sparse polynomial rings over
``QQ_I``; fraction reduction runs its GCDs over ``QQ`` with ``i`` adjoined as
an extra indeterminate (see :func:`_cancel_gaussian`).
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy import QQ, QQ_I
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

POLE_THRESHOLD = 1e-12
FD_STEP = 1e-5

_COORD_RE = re.compile(r"^(zb|z)([1-9][0-9]*)$")
_CONST_RE = re.compile(r"^[a-y][A-Za-z0-9]*$")
_FUNC_RE = re.compile(r"^([A-Z][A-Za-z0-9]*)(?:_((?:zb?[1-9][0-9]*)+))?$")
_SUFFIX_RE = re.compile(r"zb?[1-9][0-9]*")


class PoleError(ArithmeticError):
    """Raised when an expression is evaluated at (or too close to) a pole."""


# --------------------------------------------------------------------------
# symbol names


def coord(j: int, anti: bool = False) -> str:
    """Name of the j-th coordinate (1-based); ``anti`` selects ``zb_j``."""
    if j < 1:
        raise ValueError(f"coordinate index must be positive, got {j}")
    return f"zb{j}" if anti else f"z{j}"


def parse_coord(name: str) -> tuple[int, bool] | None:
    """Return ``(index, anti)`` for a coordinate name, else ``None``."""
    m = _COORD_RE.match(name)
    if m is None:
        return None
    return int(m.group(2)), m.group(1) == "zb"


def _parse_func(name: str) -> tuple[str, tuple[str, ...]] | None:
    m = _FUNC_RE.match(name)
    if m is None:
        return None
    suffix = tuple(_SUFFIX_RE.findall(m.group(2) or ""))
    return m.group(1), suffix


def symbol_kind(name: str) -> str:
    """One of ``"coord"``, ``"const"``, ``"func"``; raises on invalid names."""
    if _COORD_RE.match(name):
        return "coord"
    if name != "i" and _CONST_RE.match(name):
        return "const"
    if _parse_func(name) is not None:
        return "func"
    raise ValueError(f"invalid symbol name {name!r}")


def _coord_key(name: str) -> tuple[int, int]:
    j, anti = parse_coord(name)
    return int(anti), j


def _jet_name(base: str, suffix: Iterable[str]) -> str:
    suffix = sorted(suffix, key=_coord_key)
    return base + ("_" + "".join(suffix) if suffix else "")


def _flip_stem(name: str) -> str:
    return name[:-1] if len(name) > 1 and name.endswith("b") else name + "b"


@lru_cache(maxsize=None)
def conjugate_name(name: str) -> str:
    """Name of the conjugate partner of a symbol."""
    kind = symbol_kind(name)
    if kind == "coord":
        j, anti = parse_coord(name)
        return coord(j, not anti)
    if kind == "const":
        return _flip_stem(name)
    base, suffix = _parse_func(name)
    flipped = []
    for s in suffix:
        j, anti = parse_coord(s)
        flipped.append(coord(j, not anti))
    return _jet_name(_flip_stem(base), flipped)


@lru_cache(maxsize=None)
def symbol_key(name: str) -> tuple:
    """Global sort key; fixes the variable order of every polynomial ring."""
    kind = symbol_kind(name)
    if kind == "coord":
        return (0,) + _coord_key(name) + ("",)
    if kind == "const":
        return (1, 0, 0, name)
    base, suffix = _parse_func(name)
    return (2, len(suffix), 0, base + "".join(suffix))


@lru_cache(maxsize=None)
def _jet_derivative(name: str, v: str) -> str:
    base, suffix = _parse_func(name)
    return _jet_name(base, suffix + (v,))


def function_base(name: str) -> str | None:
    """Base function name of a jet symbol (``P_z1`` -> ``P``), else ``None``."""
    if symbol_kind(name) != "func":
        return None
    return _parse_func(name)[0]


def jet_suffix(name: str) -> tuple[str, ...]:
    return _parse_func(name)[1]


# --------------------------------------------------------------------------
# coefficients


def to_gaussian(value) -> QQ_I.dtype:
    """Convert int, Fraction, complex with exact parts, or QQ_I element."""
    if isinstance(value, QQ_I.dtype):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, Fraction)):
        value = Fraction(value)
        return QQ_I(QQ(value.numerator, value.denominator), 0)
    if isinstance(value, complex):
        re_, im_ = Fraction(value.real), Fraction(value.imag)
        return QQ_I(QQ(re_.numerator, re_.denominator), QQ(im_.numerator, im_.denominator))
    if isinstance(value, float):
        f = Fraction(value)
        return QQ_I(QQ(f.numerator, f.denominator), 0)
    raise TypeError(f"cannot convert {type(value).__name__} to a Gaussian rational")


def _conj_coeff(c):
    return QQ_I(c.x, -c.y)


def _coeff_complex(c) -> complex:
    return complex(float(c.x), float(c.y))


def format_coeff(c) -> str:
    """Format a Gaussian rational so that the expression parser reads it back."""
    x, y = c.x, c.y
    if y == 0:
        return str(x)
    if x == 0:
        return _imag_str(y)
    sign = "-" if y < 0 else "+"
    return f"({x}{sign}{_imag_str(abs(y))})"


def _imag_str(y) -> str:
    num, den = int(y.numerator), int(y.denominator)
    head = "-" if num < 0 else ""
    num = abs(num)
    core = "i" if num == 1 and den == 1 else f"{num}i"
    if num == 1 and den != 1:
        core = "1i"
    return head + core + (f"/{den}" if den != 1 else "")


# --------------------------------------------------------------------------
# rings


@lru_cache(maxsize=4096)
def _ring(names: tuple[str, ...]) -> PolyRing:
    return PolyRing(names, QQ_I, lex)


@lru_cache(maxsize=4096)
def _names(ring: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


_EMPTY = _ring(("_one",))


def _union_ring(a: PolyRing, b: PolyRing) -> PolyRing:
    if a is b:
        return a
    names = set(_names(a)) | set(_names(b))
    names.discard("_one")
    if not names:
        return _EMPTY
    return _ring(tuple(sorted(names, key=symbol_key)))


def _used_ring(*polys) -> PolyRing:
    ring = polys[0].ring
    used = [False] * ring.ngens
    for p in polys:
        for monom in p.itermonoms():
            for k, e in enumerate(monom):
                if e:
                    used[k] = True
    names = tuple(n for n, u in zip(_names(ring), used) if u)
    return _ring(names) if names else _EMPTY


# --------------------------------------------------------------------------
# Expr


class Expr:
    """Immutable exact rational function; see the module docstring."""

    __slots__ = ("num", "den", "_str")

    def __init__(self, num, den=None, *, _normalized: bool = False):
        if den is None:
            den = num.ring.one
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._str = None

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, value) -> "Expr":
        c = to_gaussian(value)
        return cls(_EMPTY.ground_new(c), _EMPTY.one, _normalized=True)

    @classmethod
    def symbol(cls, name: str) -> "Expr":
        symbol_kind(name)
        r = _ring((name,))
        return cls(r.gens[0], r.one, _normalized=True)

    @classmethod
    def coerce(cls, value) -> "Expr":
        if isinstance(value, Expr):
            return value
        return cls.const(value)

    # arithmetic ---------------------------------------------------------

    def _lift(self, other: "Expr"):
        ring = _union_ring(self.num.ring, other.num.ring)
        if ring is self.num.ring and ring is other.num.ring:
            return self.num, self.den, other.num, other.den
        return (
            self.num.set_ring(ring),
            self.den.set_ring(ring),
            other.num.set_ring(ring),
            other.den.set_ring(ring),
        )

    def __add__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b, c, d = self._lift(other)
        if b == d:
            return Expr(a + c, b)
        return Expr(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return Expr(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Expr.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        a, b, c, d = self._lift(other)
        return Expr(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by an identically zero expression")
        a, b, c, d = self._lift(other)
        return Expr(a * d, b * c)

    def __rtruediv__(self, other):
        return Expr.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k >= 0:
            return Expr(self.num**k, self.den**k, _normalized=True) if k else ONE
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return Expr(self.den ** (-k), self.num ** (-k))

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def equals(self, other) -> bool:
        """Exact equality via the cross-multiplied difference."""
        other = Expr.coerce(other)
        a, b, c, d = self._lift(other)
        return not (a * d - c * b)

    def __eq__(self, other):
        try:
            return self.equals(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        # equality is semantic and the reduced form is not unique when a
        # common factor only splits over QQ(i), so the hash must be coarse
        return hash(self.is_zero())

    def is_constant(self) -> bool:
        return self.num.ring is _EMPTY or not self.free_symbols

    @property
    def free_symbols(self) -> frozenset[str]:
        return frozenset(n for n in _names(self.num.ring) if n != "_one")

    def depends_on(self, name: str) -> bool:
        return name in self.free_symbols

    # calculus -----------------------------------------------------------

    def diff(self, v: str) -> "Expr":
        """Wirtinger derivative with respect to the coordinate ``v``.

        Constants have zero derivative; a generic-function symbol ``P_s``
        differentiates to ``P_sv``.
        """
        if parse_coord(v) is None:
            raise ValueError(f"can only differentiate along a coordinate, got {v!r}")
        dnum = _poly_diff(self.num, v)
        if self.den == self.den.ring.one:
            return dnum
        dden = _poly_diff(self.den, v)
        num = Expr(self.num, _normalized=True)
        den = Expr(self.den, _normalized=True)
        return (dnum * den - num * dden) / (den * den)

    def conjugate(self) -> "Expr":
        return Expr(_poly_conj(self.num), _poly_conj(self.den))

    # evaluation ---------------------------------------------------------

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        """Numerical value given a complex value for every free symbol."""
        den = _poly_eval(self.den, values)
        if abs(den) <= POLE_THRESHOLD:
            raise PoleError(f"denominator {abs(den):.3g} vanishes at evaluation point")
        return _poly_eval(self.num, values) / den

    def subs(self, mapping: Mapping[str, "Expr"]) -> "Expr":
        """Replace symbols by expressions (jets of functions are not expanded)."""
        mapping = {k: Expr.coerce(v) for k, v in mapping.items()}
        if not (self.free_symbols & mapping.keys()):
            return self
        return _poly_subs(self.num, mapping) / _poly_subs(self.den, mapping)

    # formatting ---------------------------------------------------------

    def __str__(self):
        if self._str is None:
            self._str = _format(self.num, self.den)
        return self._str

    def __repr__(self):
        return f"Expr({str(self)!r})"


def _normalize(num, den):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return _EMPTY.zero, _EMPTY.one
    if den != den.ring.one:
        num, den = _make_monic(num, den)
        while True:
            g_num, g_den, changed = _cancel_gaussian(num, den)
            if not changed:
                break
            num, den = _make_monic(g_num, g_den)
    ring = _used_ring(num, den)
    if ring is not num.ring:
        num, den = num.set_ring(ring), den.set_ring(ring)
    return num, den


def _make_monic(num, den):
    lc = den.LC
    if lc != QQ_I.one:
        inv = QQ_I.quo(QQ_I.one, lc)
        num = num.mul_ground(inv)
        den = den.mul_ground(inv)
    return num, den


# GCDs over QQ_I go through sympy's subresultant PRS, which is far too slow
# for multivariate input.  Instead write a + b*i as a + b*_I over QQ, where
# the heuristic GCD applies, and map common factors back with _I -> i.  A
# factor common in QQ[_I, ...] is common after the substitution, so the
# cancellation is always valid; factors that only split over QQ(i) may be
# missed, which costs size but never correctness (equality cross-multiplies).


@lru_cache(maxsize=4096)
def _qq_ring(names: tuple[str, ...]) -> PolyRing:
    return PolyRing(names + ("_I",), QQ, lex)


_I_POWERS = (QQ_I(1, 0), QQ_I(0, 1), QQ_I(-1, 0), QQ_I(0, -1))


def _to_qq(p, ring: PolyRing):
    terms = {}
    for monom, c in p.iterterms():
        if c.x:
            terms[monom + (0,)] = c.x
        if c.y:
            terms[monom + (1,)] = c.y
    return ring.from_dict(terms)


def _from_qq(q, ring: PolyRing):
    terms: dict = {}
    for monom, c in q.iterterms():
        key = monom[:-1]
        v = _I_POWERS[monom[-1] % 4] * QQ_I(c, 0)
        terms[key] = terms.get(key, QQ_I.zero) + v
    return ring.from_dict({k: v for k, v in terms.items() if v})


def _cancel_gaussian(num, den):
    qring = _qq_ring(_names(num.ring))
    nq, dq = _to_qq(num, qring), _to_qq(den, qring)
    g = nq.gcd(dq)
    if g.is_ground:
        return num, den, False
    return _from_qq(nq.exquo(g), num.ring), _from_qq(dq.exquo(g), num.ring), True


def _poly_diff(p, v: str) -> Expr:
    names = _names(p.ring)
    out = ZERO
    if v in names:
        out = Expr(p.diff(p.ring.gens[names.index(v)]))
    for k, name in enumerate(names):
        if name != "_one" and symbol_kind(name) == "func":
            dp = p.diff(p.ring.gens[k])
            if dp:
                out = out + Expr(dp) * Expr.symbol(_jet_derivative(name, v))
    return out


def _poly_conj(p):
    names = _names(p.ring)
    if names == ("_one",):
        return p.ring.from_dict({m: _conj_coeff(c) for m, c in p.iterterms()})
    cnames = [conjugate_name(n) for n in names]
    ring = _ring(tuple(sorted(cnames, key=symbol_key)))
    index = {n: k for k, n in enumerate(_names(ring))}
    target = [index[n] for n in cnames]
    terms = {}
    for monom, c in p.iterterms():
        m = [0] * ring.ngens
        for k, e in enumerate(monom):
            m[target[k]] = e
        terms[tuple(m)] = _conj_coeff(c)
    return ring.from_dict(terms)


def _poly_eval(p, values: Mapping[str, complex]) -> complex:
    names = _names(p.ring)
    point = []
    for n in names:
        if n == "_one":
            point.append(1.0)
            continue
        try:
            point.append(complex(values[n]))
        except KeyError:
            raise KeyError(f"no numerical value for symbol {n!r}") from None
    total = 0j
    for monom, c in p.iterterms():
        t = _coeff_complex(c)
        for x, e in zip(point, monom):
            if e:
                t *= x**e
        total += t
    return total


def _poly_subs(p, mapping: Mapping[str, Expr]) -> Expr:
    names = _names(p.ring)
    gens = [mapping[n] if n in mapping else (ONE if n == "_one" else Expr.symbol(n)) for n in names]
    total = ZERO
    for monom, c in p.iterterms():
        t = Expr.const(c)
        for g, e in zip(gens, monom):
            if e:
                t = t * g**e
        total = total + t
    return total


def _format_poly(p) -> tuple[str, int]:
    names = _names(p.ring)
    parts: list[str] = []
    terms = sorted(p.iterterms(), key=lambda t: t[0], reverse=True)
    for monom, c in terms:
        factors = [
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, monom) if e and n != "_one"
        ]
        mono = "*".join(factors)
        neg = (c.y == 0 and c.x < 0) or (c.x == 0 and c.y < 0)
        mag = QQ_I(-c.x, -c.y) if neg else c
        if not mono:
            body = format_coeff(mag)
        elif mag == QQ_I.one:
            body = mono
        else:
            body = f"{format_coeff(mag)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) or "0", len(terms)


def _format(num, den) -> str:
    ns, nterms = _format_poly(num)
    if den == den.ring.one:
        return ns
    ds, dterms = _format_poly(den)
    if nterms > 1:
        ns = f"({ns})"
    simple_den = dterms == 1 and re.fullmatch(r"[A-Za-z0-9_]+(\^[0-9]+)?", ds)
    if not simple_den:
        ds = f"({ds})"
    return f"{ns}/{ds}"


ZERO = Expr(_EMPTY.zero, _EMPTY.one, _normalized=True)
ONE = Expr(_EMPTY.one, _EMPTY.one, _normalized=True)
I = Expr.const(1j)


def const(value) -> Expr:
    return Expr.const(value)


def sym(name: str) -> Expr:
    return Expr.symbol(name)


def z(j: int) -> Expr:
    return Expr.symbol(coord(j))


def zb(j: int) -> Expr:
    return Expr.symbol(coord(j, anti=True))


# --------------------------------------------------------------------------
# numerics


@dataclass(frozen=True)
class ChartPoint:
    """A point of the chart: one complex number per holomorphic coordinate."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def values(self, extra: Mapping[str, complex] | None = None) -> dict[str, complex]:
        vals = {}
        for j, p in enumerate(self.coords, start=1):
            vals[coord(j)] = p
            vals[coord(j, True)] = p.conjugate()
        if extra:
            vals.update(extra)
        return vals

    def shifted(self, j: int, delta: complex) -> "ChartPoint":
        c = list(self.coords)
        c[j - 1] += delta
        return ChartPoint(tuple(c))


def evaluate(e: Expr, p: ChartPoint, constants: Mapping[str, complex] | None = None) -> complex:
    """Substitute ``z_j -> p_j`` and ``zb_j -> conj(p_j)``."""
    return e.evaluate(p.values(constants))


def fd_derive(
    e: Expr,
    v: str,
    p: ChartPoint,
    h: float = FD_STEP,
    constants: Mapping[str, complex] | None = None,
) -> complex:
    """Central-difference Wirtinger derivative.

    d/dz = (d/dx - i d/dy) / 2 and d/dzb = (d/dx + i d/dy) / 2, each partial
    taken by central differences in the real and imaginary part of ``z_j``.
    """
    j, anti = parse_coord(v)
    if j > p.n:
        raise ValueError(f"{v} is outside a chart of dimension {p.n}")

    def f(q: ChartPoint) -> complex:
        return evaluate(e, q, constants)

    dx = (f(p.shifted(j, h)) - f(p.shifted(j, -h))) / (2 * h)
    dy = (f(p.shifted(j, 1j * h)) - f(p.shifted(j, -1j * h))) / (2 * h)
    return 0.5 * (dx + 1j * dy) if anti else 0.5 * (dx - 1j * dy)


def sample_points(
    n: int,
    count: int,
    rng,
    modulus: tuple[float, float] = (0.5, 2.0),
) -> list[ChartPoint]:
    """Points with coordinate moduli uniform in ``modulus`` and uniform phase.

    The lower modulus bound is positive, so origin-excluded charts are respected.
    """
    lo, hi = modulus
    pts = []
    for _ in range(count):
        r = rng.uniform(lo, hi, size=n)
        t = rng.uniform(0.0, 2 * cmath.pi, size=n)
        pts.append(ChartPoint(tuple(cmath.rect(float(a), float(b)) for a, b in zip(r, t))))
    return pts


def random_constants(names: Sequence[str], rng) -> dict[str, complex]:
    """Random values for constant symbols, consistent under conjugation."""
    out: dict[str, complex] = {}
    for name in sorted(names, key=symbol_key):
        if name in out:
            continue
        partner = conjugate_name(name)
        val = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        out[name] = val
        out[partner] = val.conjugate()
    return out

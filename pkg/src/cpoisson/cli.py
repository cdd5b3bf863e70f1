"""Command-line interface.

Exit codes: 0 when every check passes, 1 when any check fails or is
indeterminate, 2 for configuration and parse errors.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from cpoisson.checks import run_checks
from cpoisson.connection import DegenerateMetricError, d_pi, dpi_label, levi_civita
from cpoisson.geometry import basis_names
from cpoisson.manifest import Manifest, ManifestError, bundled, bundled_names, load_manifest
from cpoisson.parser import ParseError, parse
from cpoisson.poisson import bracket as poisson_bracket
from cpoisson.report import emit_report

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _load(ref: str) -> Manifest:
    """Load a manifest path, or a bundled manifest by name (``cstar``)."""
    path = Path(ref)
    if not path.exists() and ref in bundled_names():
        path = bundled(ref)
    try:
        return load_manifest(path)
    except ManifestError as exc:
        _config_error(str(exc))


def _config_error(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_CONFIG)


def _require(m: Manifest, *keys: str):
    for key in keys:
        if getattr(m, key) is None:
            _config_error(f"{m.source}: this command needs {key!r}")


def _connection(m: Manifest):
    _require(m, "poisson", "cotangent_metric")
    try:
        return levi_civita(m.cotangent_metric, m.poisson, verify=False)
    except DegenerateMetricError as exc:
        _config_error(str(exc))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Exact checks for (1,1) Poisson tensors, contravariant connections and Hermitian metrics.

    MANIFEST is a TOML file or the name of a bundled example
    (cstar, cstar-family, cstar-generic, example31-n2, flat-n2, jacobi-counterexample).
    """


@main.command()
@click.argument("manifest")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Write the report to this file.")
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text", show_default=True)
@click.option("--seed", type=int, help="Override the numeric seed.")
@click.option("--samples", type=click.IntRange(min=0), help="Override the number of sample points.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), help="Override the relative tolerance.")
def check(manifest, report_path, fmt, seed, samples, tol):
    """Run the manifest's checks and report verdicts with witnesses."""
    m = _load(manifest).with_numeric(seed=seed, samples=samples, rtol=tol)
    r = run_checks(m)
    out = emit_report(r, fmt)
    if report_path:
        Path(report_path).write_bytes(out)
        click.echo(emit_report(r, "text").decode(), nl=False)
    else:
        click.echo(out.decode(), nl=False)
    sys.exit(EXIT_PASS if r.passed else EXIT_FAIL)


@main.command()
@click.argument("manifest")
def christoffels(manifest):
    """Print the Christoffel symbols Gamma^c_ab of the Levi-Civita contravariant connection.

    D_{e^a} e^b = sum_c Gamma^c_ab e^c, with e^1..e^2n = dz_1..dz_n, dzb_1..dzb_n.
    """
    m = _load(manifest)
    conn = _connection(m)
    dim = 2 * m.n
    click.echo("basis: " + "  ".join(f"{k + 1}=d{name}" for k, name in enumerate(basis_names(m.n))))
    for c in range(1, dim + 1):
        for a in range(1, dim + 1):
            for b in range(1, dim + 1):
                click.echo(f"Gamma^{c}_{a}{b} = {conn.christoffel(c, a, b)}")


@main.command()
@click.argument("manifest")
@click.option("-f", "f_text", required=True, help="First function, in the expression grammar.")
@click.option("-g", "g_text", required=True, help="Second function.")
def bracket(manifest, f_text, g_text):
    """Print the bracket {f, g} = pi(df, dg)."""
    m = _load(manifest)
    _require(m, "poisson")
    allowed = None
    if m.constants or m.function_names:
        from cpoisson.expr import conjugate_name

        allowed = {s for name in m.constants + m.function_names for s in (name, conjugate_name(name))}
    try:
        f = parse(f_text, m.n, allowed)
        g = parse(g_text, m.n, allowed)
    except ParseError as exc:
        _config_error(str(exc))
    click.echo(str(poisson_bracket(m.poisson, f, g)))


@main.command()
@click.argument("manifest")
@click.option("--all", "show_all", is_flag=True, help="Include components that vanish identically.")
def dpi(manifest, show_all):
    """Print the components (D_{e^a} pi)(e^b, e^c) for b != c."""
    m = _load(manifest)
    conn = _connection(m)
    T = d_pi(conn)
    for (a, b, c), v in T.entries():
        if b == c or (v.is_zero() and not show_all):
            continue
        click.echo(f"{dpi_label(m.n, a, b, c)} = {v}")


if __name__ == "__main__":  # pragma: no cover
    main()

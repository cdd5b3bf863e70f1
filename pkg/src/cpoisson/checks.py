"""Dispatch manifest checks to the symbolic layer and cross-check numerically.

Each check yields an exact verdict.  Independently, the same quantities are
recomputed from point values and central differences of the (instantiated)
inputs at the seeded sample points.  A symbolic pass whose numeric
counterpart is nonzero, or any symbolic value that the oracle contradicts,
is an internal-consistency failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator

import numpy as np

from cpoisson.connection import Connection, connection_axioms, d_pi, dpi_label, is_riemann_poisson, levi_civita
from cpoisson.connection import prop42_equivalence
from cpoisson.expr import ChartPoint, Expr, PoleError, sample_points
from cpoisson.geometry import basis_names, d, j_factor
from cpoisson.kahler import compatibility_triple, decompose, hermitian_check, is_closed, nondegeneracy
from cpoisson.kahler import recomposition_residual, three_form_label
from cpoisson.linalg import inverse, matmul, transpose
from cpoisson.manifest import Manifest
from cpoisson.numeric import (
    Instantiation,
    christoffel_numeric,
    connection_residual_numeric,
    d_two_form_numeric,
    dpi_numeric,
    j_numeric,
    jacobi_numeric,
    lie_derivative_numeric,
    relative_error,
)
from cpoisson.poisson import j_invariance, jacobi_tensor, jacobi_verdict, lie_derivative_bivector, reality_check
from cpoisson.poisson import coordinate_order, is_poisson_vector_field
from cpoisson.report import CheckEntry, CheckReport
from cpoisson.verdict import FAIL, INDETERMINATE, PASS, Verdict, combine

# a point yields (location, symbolic value, oracle value) triples
Triples = Iterator[tuple[str, complex, complex]]


@dataclass
class NumericSummary:
    max_error: float = 0.0
    worst: str = ""
    points: int = 0
    poles: int = 0

    def update(self, loc: str, sym: complex, num: complex, where: ChartPoint):
        err = relative_error(sym, num)
        if err > self.max_error or not self.worst:
            self.max_error = err
            self.worst = f"{loc} at z={_fmt_point(where)}: symbolic {_fmt_c(sym)}, numeric {_fmt_c(num)}"


def _fmt_c(v: complex) -> str:
    return f"{v.real:.6g}{v.imag:+.6g}i"


def _fmt_point(p: ChartPoint) -> str:
    return "(" + ", ".join(_fmt_c(c) for c in p.coords) + ")"


class Context:
    """Shared inputs and lazily computed objects for one manifest run."""

    def __init__(self, m: Manifest):
        self.m = m
        rng = np.random.default_rng(m.numeric.seed)
        self.inst = Instantiation.random(m.n, m.expressions(), rng)
        self.points = sample_points(m.n, m.numeric.samples, rng, m.numeric.modulus)

    @cached_property
    def conn(self) -> Connection:
        return levi_civita(self.m.cotangent_metric, self.m.poisson, verify=False)

    @cached_property
    def kahler(self):
        return decompose(self.m.hermitian)

    def sweep(self, triples: Callable[[ChartPoint], Triples]) -> NumericSummary:
        s = NumericSummary()
        for p in self.points:
            try:
                for loc, sym, num in triples(p):
                    s.update(loc, sym, num, p)
            except (PoleError, np.linalg.LinAlgError):
                s.poles += 1
                continue
            s.points += 1
        return s


# --------------------------------------------------------------------------
# individual checks: each returns (verdict, numeric summary)


def _jacobi(ctx: Context):
    pi = ctx.m.poisson
    T = jacobi_tensor(pi)
    names = basis_names(pi.n)

    def triples(p):
        num = jacobi_numeric(ctx.inst, pi.matrix, p)
        for key, v in sorted(T.components.items()):
            a, b, c = coordinate_order(pi.n, key)
            sign = 1 if T[a, b, c] == v else -1
            yield f"J({names[a]},{names[b]},{names[c]})", sign * ctx.inst(v, p), sign * num[key]

    return jacobi_verdict(pi), ctx.sweep(triples)


def _reality(ctx: Context):
    pi = ctx.m.poisson
    n = pi.n

    def triples(p):
        Bv = ctx.inst.matrix(pi.B, p)
        for j in range(n):
            for k in range(j, n):
                r = pi.B[j][k].conjugate() + pi.B[k][j]
                yield f"({j + 1},{k + 1})", ctx.inst(r, p), Bv[j, k].conjugate() + Bv[k, j]

    return reality_check(pi), ctx.sweep(triples)


def _j_invariance(ctx: Context):
    pi = ctx.m.poisson
    n = pi.n
    Jn = j_numeric(n)
    P = pi.matrix

    def triples(p):
        Pv = ctx.inst.matrix(P, p)
        JP = Jn @ Pv @ Jn.T - Pv
        for a in range(2 * n):
            for b in range(a + 1, 2 * n):
                r = j_factor(a, n) * j_factor(b, n) * P[a][b] - P[a][b]
                yield f"({a},{b})", ctx.inst(r, p), JP[a, b]

    return j_invariance(pi), ctx.sweep(triples)


def _poisson_field(ctx: Context):
    pi = ctx.m.poisson
    verdicts = []
    lies = {}
    for name, X in sorted(ctx.m.vector_fields.items()):
        v = is_poisson_vector_field(X, pi)
        verdicts.append(Verdict(v.status, tuple((f"{name}: {loc}", w) for loc, w in v.witnesses), v.notes))
        lies[name] = (X, lie_derivative_bivector(X, pi).matrix)
    dim = 2 * pi.n

    def triples(p):
        for name, (X, L) in lies.items():
            Ln = lie_derivative_numeric(ctx.inst, X.components, pi.matrix, p)
            for a in range(dim):
                for b in range(a + 1, dim):
                    yield f"{name}[{a},{b}]", ctx.inst(L[a][b], p), Ln[a, b]

    return combine(verdicts), ctx.sweep(triples)


def _dpi_triples(ctx: Context):
    conn = ctx.conn
    T = d_pi(conn)
    G = ctx.m.cotangent_metric.G
    P = ctx.m.poisson.matrix
    n = ctx.m.n

    def triples(p):
        num = dpi_numeric(ctx.inst, G, P, p)
        for (a, b, c), v in T.entries():
            yield dpi_label(n, a, b, c), ctx.inst(v, p), num[a, b, c]

    return triples


def _riemann_poisson(ctx: Context):
    return is_riemann_poisson(ctx.m.cotangent_metric, ctx.m.poisson, ctx.conn), ctx.sweep(_dpi_triples(ctx))


def _connection_axioms(ctx: Context):
    conn = ctx.conn
    G = ctx.m.cotangent_metric.G
    P = ctx.m.poisson.matrix
    dim = 2 * ctx.m.n

    def triples(p):
        sym = np.array([[[ctx.inst(conn.gamma[a][b][c], p) for c in range(dim)] for b in range(dim)] for a in range(dim)])
        num = christoffel_numeric(ctx.inst, G, P, p)
        for a in range(dim):
            for b in range(dim):
                for c in range(dim):
                    yield f"Gamma^{c + 1}_{a + 1}{b + 1}", sym[a, b, c], num[a, b, c]
        # the evaluated symbolic table must itself satisfy both axioms numerically
        yield "axiom residual", connection_residual_numeric(ctx.inst, G, P, sym, p), 0.0

    return connection_axioms(conn), ctx.sweep(triples)


def _prop42(ctx: Context):
    vs = prop42_equivalence(ctx.conn)
    summary = ", ".join(f"{k}={v.status}" for k, v in vs.items())
    statuses = {v.status for v in vs.values()}
    if len(statuses) == 1:
        verdict = Verdict(PASS, (), (f"all three agree: {summary}",))
    else:
        verdict = Verdict(FAIL, (("verdicts", summary),))
    return verdict, ctx.sweep(_dpi_triples(ctx))


def _hermitian(ctx: Context):
    h = ctx.m.hermitian
    n = h.n

    def triples(p):
        Hv = ctx.inst.matrix(h.H, p)
        for j in range(n):
            for k in range(n):
                r = h.H[j][k].conjugate() - h.H[k][j]
                yield f"({j + 1},{k + 1})", ctx.inst(r, p), Hv[j, k].conjugate() - Hv[k, j]

    return hermitian_check(h), ctx.sweep(triples)


def _kahler_triple(ctx: Context):
    g, omega = ctx.kahler
    rec = recomposition_residual(ctx.m.hermitian, g, omega)
    verdict = combine([Verdict.from_residuals([("h - g - i omega", rec)]), compatibility_triple(g, omega)])
    n = g.n
    Jn = j_numeric(n)
    sym = matmul(inverse(g.M), transpose(omega.W))
    rng = np.random.default_rng(ctx.m.numeric.seed)

    def triples(p):
        Gv = ctx.inst.matrix(g.M, p)
        Wv = ctx.inst.matrix(omega.W, p)
        num = np.linalg.solve(Gv, Wv.T)
        for a in range(2 * n):
            for b in range(2 * n):
                yield f"(G^-1 W^T)[{a}][{b}]", ctx.inst(sym[a][b], p), num[a, b]
        # omega(X, Y) = g(JX, Y) on random vectors
        x, y = rng.normal(size=(2, 2 * n)) + 1j * rng.normal(size=(2, 2 * n))
        yield "omega(X,Y) - g(JX,Y)", x @ Wv @ y - (Jn @ x) @ Gv @ y, 0.0
        yield "J - G^-1 W^T", float(np.abs(num - Jn).max()), 0.0

    return verdict, ctx.sweep(triples)


def _closed(ctx: Context):
    _, omega = ctx.kahler
    dw = d(omega)
    n = omega.n

    def triples(p):
        num = d_two_form_numeric(ctx.inst, omega.W, p)
        for k, v in sorted(dw.components.items()):
            yield three_form_label(n, k), ctx.inst(v, p), num[k]

    verdict = is_closed(omega)
    nd = nondegeneracy(omega, ctx.points, ctx.inst.constants)
    return verdict.with_notes(f"nondegeneracy: {nd.status}", *nd.notes), ctx.sweep(triples)


CHECK_FUNCTIONS: dict[str, Callable[[Context], tuple[Verdict, NumericSummary]]] = {
    "closed": _closed,
    "connection-axioms": _connection_axioms,
    "hermitian": _hermitian,
    "j-invariance": _j_invariance,
    "jacobi": _jacobi,
    "kahler-triple": _kahler_triple,
    "poisson-field": _poisson_field,
    "prop42-equivalence": _prop42,
    "reality": _reality,
    "riemann-poisson": _riemann_poisson,
}


def _entry(name: str, ctx: Context) -> CheckEntry:
    start = time.perf_counter()
    rtol = ctx.m.numeric.rtol
    try:
        verdict, num = CHECK_FUNCTIONS[name](ctx)
    except Exception as exc:  # a broken check is reported, never fatal
        return CheckEntry(
            name, INDETERMINATE, notes=(f"error: {type(exc).__name__}: {exc}",), elapsed=time.perf_counter() - start
        )
    witnesses = tuple((loc, _fmt_witness(w)) for loc, w in verdict.witnesses)
    status = verdict.status
    notes = list(verdict.notes)
    if num.points:
        notes.append(f"numeric oracle: {num.points} points" + (f", {num.poles} skipped at poles" if num.poles else ""))
        if num.max_error > rtol:
            status = FAIL
            witnesses += (("internal-consistency", num.worst),)
            notes.append(f"numeric oracle disagrees with the exact result (relative error {num.max_error:.3g})")
    elif ctx.points:
        notes.append("numeric oracle: no usable sample points")
    residuals = {"max_rel_error": float(f"{num.max_error:.3e}")}
    return CheckEntry(name, status, witnesses, residuals, tuple(notes), time.perf_counter() - start)


def _fmt_witness(w) -> str:
    if isinstance(w, Expr):
        return str(w)
    if isinstance(w, float):
        return f"{w:.6g}"
    return str(w)


def run_checks(m: Manifest, checks: Iterable[str] | None = None) -> CheckReport:
    """Run the manifest's checks; entries are ordered by check name."""
    ctx = Context(m)
    names = sorted(set(m.checks if checks is None else checks))
    entries = tuple(_entry(name, ctx) for name in names)
    return CheckReport(m.name, entries, m.numeric.seed, m.numeric.samples, m.numeric.rtol)

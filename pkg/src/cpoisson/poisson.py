"""Poisson brackets of (1,1) bivectors and the structural checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from cpoisson.expr import ZERO, Expr
from cpoisson.geometry import (
    Bivector11,
    GeneralBivector,
    VectorField,
    apply_J,
    basis_names,
    d,
    partial,
    pi_apply,
    pi_sharp,
)
from cpoisson.verdict import FAIL, INDETERMINATE, PASS, Verdict


def bracket(pi: Bivector11, f, g) -> Expr:
    """{f, g} = pi(df, dg)."""
    n = pi.n
    return pi_apply(pi, d(Expr.coerce(f), n), d(Expr.coerce(g), n))


def hamiltonian_field(pi: Bivector11, f) -> VectorField:
    """X_f with X_f(g) = {f, g}; equal to pi_#(df)."""
    return pi_sharp(pi, d(Expr.coerce(f), pi.n))


def jacobiator(pi: Bivector11, f, g, h) -> Expr:
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}}, computed rather than assumed."""
    return bracket(pi, f, bracket(pi, g, h)) + bracket(pi, g, bracket(pi, h, f)) + bracket(pi, h, bracket(pi, f, g))


def _perm_sign(idx: tuple[int, int, int]) -> tuple[int, tuple[int, int, int]]:
    a, b, c = idx
    if len({a, b, c}) < 3:
        return 0, idx
    items = [a, b, c]
    sign = 1
    for i in range(3):
        for j in range(2 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


@dataclass(frozen=True)
class JacobiTensor:
    """Jacobiator of the coordinate functions, stored for sorted triples a<b<c.

    Indexing with any triple applies the antisymmetry sign.
    """

    n: int
    components: Mapping[tuple[int, int, int], Expr] = field(default_factory=dict)

    def __getitem__(self, idx: tuple[int, int, int]) -> Expr:
        sign, key = _perm_sign(tuple(idx))
        if sign == 0:
            return ZERO
        v = self.components.get(key, ZERO)
        return v if sign > 0 else -v

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.components.values())

    def nonzero(self) -> list[tuple[tuple[int, int, int], Expr]]:
        return [(k, v) for k, v in sorted(self.components.items()) if not v.is_zero()]


def jacobi_tensor(pi: Bivector11) -> JacobiTensor:
    """Components jacobiator(zeta_a, zeta_b, zeta_c) over coordinate functions."""
    n = pi.n
    P = pi.matrix
    comps = {}
    for a, b, c in combinations(range(2 * n), 3):
        comps[a, b, c] = _coordinate_jacobiator(P, n, a, b, c)
    return JacobiTensor(n, comps)


def _coordinate_jacobiator(P, n, a, b, c) -> Expr:
    # {zeta_a, g} = sum_d pi^ad d_d g and {zeta_b, zeta_c} = pi^bc
    total = ZERO
    for x, y, w in ((a, b, c), (b, c, a), (c, a, b)):
        for k in range(2 * n):
            if not P[x][k].is_zero():
                total = total + P[x][k] * partial(P[y][w], k, n)
    return total


def schouten_components(pi) -> dict[tuple[int, int, int], Expr]:
    """Coordinate Schouten expression sum_d (pi^ad d_d pi^bc + cyclic), a<b<c."""
    P = pi.matrix
    n = len(P) // 2
    out = {}
    for a, b, c in combinations(range(2 * n), 3):
        total = ZERO
        for dd in range(2 * n):
            total = total + P[a][dd] * partial(P[b][c], dd, n)
            total = total + P[b][dd] * partial(P[c][a], dd, n)
            total = total + P[c][dd] * partial(P[a][b], dd, n)
        out[a, b, c] = total
    return out


def lie_derivative_bivector(X: VectorField, pi) -> GeneralBivector:
    """(L_X pi)^ab = sum_d (X^d d_d pi^ab - pi^db d_d X^a - pi^ad d_d X^b)."""
    P = pi.matrix
    n = len(P) // 2
    dim = 2 * n
    dX = [[partial(X[a], k, n) for k in range(dim)] for a in range(dim)]
    m = [[ZERO] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(a + 1, dim):
            v = X(P[a][b])
            for k in range(dim):
                if not P[k][b].is_zero():
                    v = v - P[k][b] * dX[a][k]
                if not P[a][k].is_zero():
                    v = v - P[a][k] * dX[b][k]
            m[a][b] = v
            m[b][a] = -v
    return GeneralBivector(tuple(tuple(r) for r in m))


def _label(n: int, a: int) -> str:
    return "d/d" + basis_names(n)[a]


def is_poisson_vector_field(X: VectorField, pi) -> Verdict:
    """Pass iff L_X pi vanishes identically."""
    L = lie_derivative_bivector(X, pi)
    n = L.n
    return Verdict.from_residuals(
        (f"[X,pi]^({_label(n, a)},{_label(n, b)})", v) for a, b, v in L.nonzero()
    )


def xp1_check(X: VectorField, pi: Bivector11) -> dict[tuple[int, int], Verdict]:
    """Per-pair diagnostic d_zj(X_j / pi_jk) + d_zbk(Xb_k / pi_jk) = 0.

    Keys are 0-based ``(j, k)``.  Pairs with identically zero ``pi_jk`` are
    indeterminate.  When ``X`` is not holomorphic/antiholomorphic blockwise,
    each verdict carries a note saying the hypothesis fails.
    """
    n = pi.n
    notes = () if X.is_holomorphic() else ("X is not holomorphic/antiholomorphic blockwise",)
    names = basis_names(n)
    out = {}
    for j in range(n):
        for k in range(n):
            p = pi.B[j][k]
            loc = f"({j + 1},{k + 1})"
            if p.is_zero():
                out[j, k] = Verdict(INDETERMINATE, (), notes + (f"pi_{j + 1}{k + 1} is identically zero",))
                continue
            r = (X[j] / p).diff(names[j]) + (X[n + k] / p).diff(names[n + k])
            out[j, k] = Verdict.from_residuals([(loc, r)], notes)
    return out


def reality_check(pi: Bivector11) -> Verdict:
    """Pass iff conj(B_jk) + B_kj = 0 for all j, k (B is i times a Hermitian matrix)."""
    n = pi.n
    return Verdict.from_residuals(
        (f"conj(B_{j + 1}{k + 1}) + B_{k + 1}{j + 1}", pi.B[j][k].conjugate() + pi.B[k][j])
        for j in range(n)
        for k in range(j, n)
    )


def j_invariance(pi) -> Verdict:
    """Pass iff J(pi) = pi."""
    if isinstance(pi, Bivector11):
        Jp = apply_J(pi)
        n = pi.n
        return Verdict.from_residuals(
            (f"(J pi - pi)_{j + 1}{k + 1}", Jp.B[j][k] - pi.B[j][k]) for j in range(n) for k in range(n)
        )
    Jp = apply_J(pi)
    dim = len(pi.M)
    return Verdict.from_residuals(
        (f"(J pi - pi)^{a}{b}", Jp.M[a][b] - pi.M[a][b]) for a in range(dim) for b in range(a + 1, dim)
    )


def coordinate_order(n: int, abc: tuple[int, int, int]) -> tuple[int, int, int]:
    """Sort a triple by coordinate number, z_j before zb_j: z1, zb1, z2, zb2, ..."""
    return tuple(sorted(abc, key=lambda a: (a % n, a >= n)))


def jacobi_verdict(pi: Bivector11) -> Verdict:
    """Pass iff the Jacobi tensor vanishes identically.

    Witness triples are listed in coordinate order, e.g. J(zb1,z2,zb2).
    """
    T = jacobi_tensor(pi)
    n = pi.n
    names = basis_names(n)
    out = []
    for key in sorted(T.components, key=lambda k: tuple((a % n, a >= n) for a in coordinate_order(n, k))):
        a, b, c = coordinate_order(n, key)
        out.append((f"J({names[a]},{names[b]},{names[c]})", T[a, b, c]))
    return Verdict.from_residuals(out)


__all__ = [
    "FAIL",
    "INDETERMINATE",
    "PASS",
    "JacobiTensor",
    "bracket",
    "coordinate_order",
    "hamiltonian_field",
    "is_poisson_vector_field",
    "j_invariance",
    "jacobi_tensor",
    "jacobi_verdict",
    "jacobiator",
    "lie_derivative_bivector",
    "reality_check",
    "schouten_components",
    "xp1_check",
]

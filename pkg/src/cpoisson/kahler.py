"""Hermitian metrics: h = g + i omega, compatibility with J, closedness of omega.

Conventions (all over the realified basis, see :mod:`cpoisson.geometry`):

* g = (h + conj h) / 2 = (1/2) sum h_jk (dz_j (x) dzb_k + dzb_k (x) dz_j);
* omega(X, Y) = g(JX, Y), which is (i/2) sum h_jk dz_j ^ dzb_k;
* h is evaluated conjugate-linearly in its first argument, so that
  h(X, Y) = g(X, Y) + i omega(X, Y).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from cpoisson.expr import ZERO, ChartPoint, Expr, PoleError, evaluate
from cpoisson.geometry import (
    HermitianMetric,
    ThreeForm,
    TwoForm,
    VectorField,
    apply_J,
    basis_names,
    bilinear,
    d,
    j_factor,
    j_matrix,
)
from cpoisson.linalg import Matrix, SingularMatrixError, as_matrix, det, inverse, is_symmetric, matmul, transpose
from cpoisson.verdict import FAIL, INDETERMINATE, PASS, Verdict, combine


@dataclass(frozen=True)
class RiemannMetric:
    """Symmetric bilinear form on the realified tangent basis."""

    M: Matrix

    def __post_init__(self):
        object.__setattr__(self, "M", as_matrix(self.M))
        if not is_symmetric(self.M):
            raise ValueError("Riemannian metric matrix is not symmetric")

    @property
    def n(self) -> int:
        return len(self.M) // 2

    def __call__(self, X: VectorField, Y: VectorField) -> Expr:
        return bilinear(self.M, X, Y)


def generic_vectors(n: int) -> tuple[VectorField, VectorField]:
    """Two vector fields with independent constant symbols as components."""
    X = VectorField(tuple(Expr.symbol(f"xv{a + 1}") for a in range(2 * n)))
    Y = VectorField(tuple(Expr.symbol(f"yv{a + 1}") for a in range(2 * n)))
    return X, Y


def hermitian_check(h: HermitianMetric) -> Verdict:
    return Verdict.from_residuals(
        (f"conj(h_{j + 1}{k + 1}) - h_{k + 1}{j + 1}", r) for j, k, r in h.non_hermitian_entries()
    )


def decompose(h: HermitianMetric) -> tuple[RiemannMetric, TwoForm]:
    """Split h into its Riemannian metric g and fundamental form omega."""
    if not h.is_hermitian():
        raise ValueError("coefficient matrix is not Hermitian")
    n = h.n
    dim = 2 * n
    g = [[ZERO] * dim for _ in range(dim)]
    for j in range(n):
        for k in range(n):
            half = h.H[j][k] / 2
            g[j][n + k] = half
            g[n + k][j] = half
    w = [[j_factor(a, n) * g[a][b] for b in range(dim)] for a in range(dim)]
    return RiemannMetric(tuple(map(tuple, g))), TwoForm(tuple(map(tuple, w)))


def recomposition_residual(h: HermitianMetric, g: RiemannMetric, omega: TwoForm) -> Expr:
    """h(X,Y) - g(X,Y) - i omega(X,Y) on generic vectors."""
    X, Y = generic_vectors(h.n)
    return h(X, Y) - g(X, Y) - Expr.const(1j) * omega(X, Y)


def j_invariance_h(h: HermitianMetric | Sequence[Sequence[Expr]]) -> Verdict:
    """Pass iff h(JX, JY) = h(X, Y) for generic X, Y.

    Accepts a :class:`HermitianMetric` or any 2n x 2n bilinear-form matrix.
    """
    M = h.bilinear_matrix if isinstance(h, HermitianMetric) else as_matrix(h)
    n = len(M) // 2
    X, Y = generic_vectors(n)
    r = bilinear(M, apply_J(X), apply_J(Y)) - bilinear(M, X, Y)
    return Verdict.from_residuals([("h(JX,JY) - h(X,Y)", r)])


def compatibility_triple(g: RiemannMetric, omega: TwoForm) -> Verdict:
    """g(X,Y) = omega(X,JY), omega(X,Y) = g(JX,Y) and J = G^-1 W^T exactly.

    The matrix identity is J(X) = (flat_g)^-1(omega(X, .)) written over the
    realified basis, with W[a][b] = omega(e_a, e_b).
    """
    n = g.n
    X, Y = generic_vectors(n)
    first = Verdict.from_residuals([("g(X,Y) - omega(X,JY)", g(X, Y) - omega(X, apply_J(Y)))])
    second = Verdict.from_residuals([("omega(X,Y) - g(JX,Y)", omega(X, Y) - g(apply_J(X), Y))])
    try:
        Ginv = inverse(g.M)
    except SingularMatrixError:
        third = Verdict(FAIL, (("det g", ZERO),), ("g is degenerate",))
    else:
        Jm = j_matrix(n)
        P = matmul(Ginv, transpose(omega.W))
        third = Verdict.from_residuals(
            (f"(G^-1 W^T - J)[{a}][{b}]", P[a][b] - Jm[a][b]) for a in range(2 * n) for b in range(2 * n)
        )
    return combine([first, second, third])


def three_form_label(n: int, abc: tuple[int, int, int]) -> str:
    names = basis_names(n)
    return "^".join("d" + names[x] for x in abc)


def is_closed(omega: TwoForm) -> Verdict:
    """Pass iff d omega vanishes identically; witnesses are its components."""
    dw: ThreeForm = d(omega)
    return Verdict.from_residuals(
        (three_form_label(omega.n, k), v) for k, v in sorted(dw.components.items())
    )


def nondegeneracy(omega: TwoForm, points: Sequence[ChartPoint] = (), constants=None, tol: float = 1e-9) -> Verdict:
    """Symbolic determinant not identically zero, plus invertibility at sample points."""
    det_w = det(omega.W)
    if det_w.is_zero():
        return Verdict(FAIL, (("det omega", det_w),))
    notes = []
    for p in points:
        try:
            W = np.array([[evaluate(x, p, constants) for x in row] for row in omega.W])
        except PoleError:
            notes.append(f"pole at {p.coords}")
            continue
        s = np.linalg.svd(W, compute_uv=False)
        if s[-1] <= tol * max(1.0, s[0]):
            return Verdict(INDETERMINATE, (("smallest singular value", float(s[-1])),), (f"singular at {p.coords}",))
    return Verdict(PASS, (), tuple(notes))


def omega_from_hermitian(h: HermitianMetric) -> TwoForm:
    """(i/2) sum h_jk dz_j ^ dzb_k."""
    return TwoForm.from_11([[Expr.const(0.5j) * x for x in row] for row in h.H])


__all__ = [
    "RiemannMetric",
    "compatibility_triple",
    "decompose",
    "generic_vectors",
    "hermitian_check",
    "is_closed",
    "j_invariance_h",
    "nondegeneracy",
    "omega_from_hermitian",
    "recomposition_residual",
]

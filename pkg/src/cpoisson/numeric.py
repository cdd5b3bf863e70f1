"""Finite-difference oracles, independent of the symbolic derivative engine.

Generic functions (``P``, ``P_z1``, ...) are instantiated by random
polynomials in the chart coordinates; their jets are the exact derivatives of
that polynomial, so the symbolic chain rule can be checked numerically.
Every oracle below touches the inputs only through point evaluation and
central differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Mapping, Sequence

import numpy as np

from cpoisson.expr import (
    FD_STEP,
    ChartPoint,
    Expr,
    conjugate_name,
    coord,
    function_base,
    jet_suffix,
    random_constants,
    symbol_key,
    symbol_kind,
)

DEFAULT_RTOL = 1e-6


def agrees(value: complex, reference: complex, rtol: float = DEFAULT_RTOL) -> bool:
    """|value - reference| <= rtol * max(1, |reference|)."""
    return abs(value - reference) <= rtol * max(1.0, abs(reference))


def relative_error(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


def _random_polynomial(n: int, rng) -> Expr:
    coords = [Expr.symbol(coord(j)) for j in range(1, n + 1)]
    coords += [Expr.symbol(coord(j, True)) for j in range(1, n + 1)]
    monomials = [Expr.const(1)] + coords + [a * b for a, b in combinations_with_replacement(coords, 2)]
    total = Expr.const(0)
    for m in monomials:
        c = complex(int(rng.integers(-4, 5)), int(rng.integers(-4, 5))) / 4
        total = total + Expr.const(c) * m
    return total


@dataclass
class Instantiation:
    """Concrete values for the constant and generic-function symbols."""

    n: int
    constants: dict[str, complex] = field(default_factory=dict)
    functions: dict[str, Expr] = field(default_factory=dict)
    _jets: dict[str, Expr] = field(default_factory=dict, repr=False)

    @classmethod
    def random(cls, n: int, exprs: Iterable[Expr], rng) -> "Instantiation":
        names: set[str] = set()
        for e in exprs:
            names |= e.free_symbols
        consts = sorted((s for s in names if symbol_kind(s) == "const"), key=symbol_key)
        bases = sorted({function_base(s) for s in names if symbol_kind(s) == "func"})
        inst = cls(n, random_constants(consts, rng))
        for base in bases:
            if base in inst.functions:
                continue
            poly = _random_polynomial(n, rng)
            inst.functions[base] = poly
            inst.functions[conjugate_name(base)] = poly.conjugate()
        return inst

    def jet(self, name: str) -> Expr:
        if name not in self._jets:
            e = self.functions[function_base(name)]
            for v in jet_suffix(name):
                e = e.diff(v)
            self._jets[name] = e
        return self._jets[name]

    def values(self, p: ChartPoint, names: Iterable[str] = ()) -> dict[str, complex]:
        vals = p.values(self.constants)
        for s in names:
            if s not in vals and symbol_kind(s) == "func":
                vals[s] = self.jet(s).evaluate(vals)
        return vals

    def __call__(self, e: Expr, p: ChartPoint) -> complex:
        """Value of ``e`` at ``p``; may raise :class:`PoleError`."""
        return e.evaluate(self.values(p, e.free_symbols))

    def fd(self, e: Expr, a: int, p: ChartPoint, h: float = FD_STEP) -> complex:
        """Central-difference Wirtinger derivative along realified index ``a``."""
        n = self.n
        j, anti = (a - n + 1, True) if a >= n else (a + 1, False)
        dx = (self(e, p.shifted(j, h)) - self(e, p.shifted(j, -h))) / (2 * h)
        dy = (self(e, p.shifted(j, 1j * h)) - self(e, p.shifted(j, -1j * h))) / (2 * h)
        return 0.5 * (dx + 1j * dy) if anti else 0.5 * (dx - 1j * dy)

    def grad(self, e: Expr, p: ChartPoint) -> np.ndarray:
        if e.is_constant():
            return np.zeros(2 * self.n, dtype=complex)
        return np.array([self.fd(e, a, p) for a in range(2 * self.n)])

    def matrix(self, M: Sequence[Sequence[Expr]], p: ChartPoint) -> np.ndarray:
        return np.array([[self(x, p) for x in row] for row in M], dtype=complex)


# --------------------------------------------------------------------------
# oracles; all indices over the realified basis (z_1..z_n, zb_1..zb_n)


def jacobi_numeric(inst: Instantiation, P: Sequence[Sequence[Expr]], p: ChartPoint) -> dict[tuple, complex]:
    """Jacobiator of coordinate functions from values and fd gradients of pi."""
    dim = len(P)
    Pv = inst.matrix(P, p)
    dP = {(b, c): inst.grad(P[b][c], p) for b in range(dim) for c in range(dim)}
    out = {}
    for a, b, c in combinations(range(dim), 3):
        out[a, b, c] = sum(Pv[x] @ dP[y, w] for x, y, w in ((a, b, c), (b, c, a), (c, a, b)))
    return out


def bracket_numeric(inst: Instantiation, P, f: Expr, g: Expr, p: ChartPoint) -> complex:
    return inst.grad(f, p) @ inst.matrix(P, p) @ inst.grad(g, p)


def lie_derivative_numeric(inst: Instantiation, X: Sequence[Expr], P, p: ChartPoint) -> np.ndarray:
    """(L_X pi)^ab = X.pi^ab - pi^kb d_k X^a - pi^ak d_k X^b."""
    dim = len(P)
    Pv = inst.matrix(P, p)
    Xv = np.array([inst(x, p) for x in X])
    dX = np.array([inst.grad(x, p) for x in X])
    L = np.empty((dim, dim), dtype=complex)
    for a, b in product(range(dim), repeat=2):
        L[a, b] = Xv @ inst.grad(P[a][b], p) - Pv[:, b] @ dX[a] - Pv[a] @ dX[b]
    return L


def christoffel_numeric(inst: Instantiation, G, P, p: ChartPoint) -> np.ndarray:
    """gamma[a, b, c] from a dense solve of the contravariant Koszul formula."""
    dim = len(G)
    Gv = inst.matrix(G, p)
    Pv = inst.matrix(P, p)
    dG = np.array([[inst.grad(G[b][c], p) for c in range(dim)] for b in range(dim)])
    dP = np.array([[inst.grad(P[a][b], p) for b in range(dim)] for a in range(dim)])
    # sharp[a, b, c] = pi#(e^a) . G^bc ; koszul[a, b] = d pi^ab
    sharp = np.einsum("ak,bck->abc", Pv, dG)
    gk = np.einsum("abk,kc->abc", dP, Gv)  # g*([a,b], c)
    # 2 g*(D_a b, c) = sharp(a;bc) + sharp(b;ac) - sharp(c;ab) + g*([a,b],c) + g*([c,a],b) + g*([c,b],a)
    rhs = (
        sharp
        + np.einsum("bac->abc", sharp)
        - np.einsum("cab->abc", sharp)
        + gk
        + np.einsum("cab->abc", gk)
        + np.einsum("cba->abc", gk)
    ) / 2
    return np.linalg.solve(Gv, rhs.reshape(dim * dim, dim).T).T.reshape(dim, dim, dim)


def dpi_numeric(inst: Instantiation, G, P, p: ChartPoint, gamma: np.ndarray | None = None) -> np.ndarray:
    """(D_a pi)(b, c) from numeric Christoffels and fd gradients of pi."""
    dim = len(P)
    if gamma is None:
        gamma = christoffel_numeric(inst, G, P, p)
    Pv = inst.matrix(P, p)
    dP = np.array([[inst.grad(P[b][c], p) for c in range(dim)] for b in range(dim)])
    sharp = np.einsum("ak,bck->abc", Pv, dP)
    return sharp - np.einsum("abk,kc->abc", gamma, Pv) - np.einsum("ack,bk->abc", gamma, Pv)


def connection_residual_numeric(inst: Instantiation, G, P, gamma: np.ndarray, p: ChartPoint) -> float:
    """Largest metricity or torsion residual of given Christoffel values at ``p``."""
    dim = len(G)
    Gv = inst.matrix(G, p)
    Pv = inst.matrix(P, p)
    dG = np.array([[inst.grad(G[b][c], p) for c in range(dim)] for b in range(dim)])
    dP = np.array([[inst.grad(P[a][b], p) for b in range(dim)] for a in range(dim)])
    metric = np.einsum("ak,bck->abc", Pv, dG) - np.einsum("abk,kc->abc", gamma, Gv) - np.einsum("ack,bk->abc", gamma, Gv)
    torsion = gamma - np.transpose(gamma, (1, 0, 2)) - dP
    scale = max(1.0, float(np.abs(Gv).max()), float(np.abs(Pv).max()))
    return float(max(np.abs(metric).max(), np.abs(torsion).max()) / scale)


def d_two_form_numeric(inst: Instantiation, W, p: ChartPoint) -> dict[tuple, complex]:
    dim = len(W)
    dW = {(b, c): inst.grad(W[b][c], p) for b in range(dim) for c in range(dim)}
    return {
        (a, b, c): dW[b, c][a] + dW[c, a][b] + dW[a, b][c] for a, b, c in combinations(range(dim), 3)
    }


def j_numeric(n: int) -> np.ndarray:
    return np.diag([1j] * n + [-1j] * n)


def random_vectors(n: int, rng, count: int = 2) -> list[np.ndarray]:
    return [rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n) for _ in range(count)]


def values_at(inst: Instantiation, exprs: Mapping, p: ChartPoint) -> dict:
    return {k: inst(v, p) for k, v in exprs.items()}


__all__ = [
    "DEFAULT_RTOL",
    "Instantiation",
    "agrees",
    "bracket_numeric",
    "christoffel_numeric",
    "connection_residual_numeric",
    "d_two_form_numeric",
    "dpi_numeric",
    "j_numeric",
    "jacobi_numeric",
    "lie_derivative_numeric",
    "random_vectors",
    "relative_error",
    "values_at",
]

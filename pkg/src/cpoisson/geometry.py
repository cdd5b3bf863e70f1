"""Tensors on a single chart over the basis (d/dz_1..d/dz_n, d/dzb_1..d/dzb_n).

Basis index ``a`` runs over ``0..2n-1``: ``a < n`` is holomorphic
(``d/dz_{a+1}`` or ``dz_{a+1}``), ``a >= n`` antiholomorphic.  Everything is
stored over this realified basis; being of type (1,1) is a zero-block property,
not a separate representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch
from itertools import combinations
from typing import Mapping, Sequence

from cpoisson.expr import I, ONE, ZERO, Expr, coord, parse_coord
from cpoisson.linalg import Matrix, as_matrix, is_skew, is_symmetric


@dataclass(frozen=True)
class Chart:
    """A coordinate chart of complex dimension ``n``."""

    n: int
    origin_excluded: tuple[bool, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("chart dimension must be at least 1")
        flags = tuple(self.origin_excluded) or (False,) * self.n
        if len(flags) != self.n:
            raise ValueError(f"expected {self.n} origin-exclusion flags, got {len(flags)}")
        object.__setattr__(self, "origin_excluded", flags)

    @property
    def dim(self) -> int:
        return 2 * self.n

    def coords(self) -> tuple[str, ...]:
        return basis_names(self.n)


def basis_names(n: int) -> tuple[str, ...]:
    return tuple(coord(j) for j in range(1, n + 1)) + tuple(
        coord(j, anti=True) for j in range(1, n + 1)
    )


def basis_index(name: str, n: int) -> int:
    j, anti = parse_coord(name)
    if j > n:
        raise ValueError(f"{name} is outside a chart of dimension {n}")
    return j - 1 + (n if anti else 0)


def partial(f: Expr, a: int, n: int) -> Expr:
    """Derivative of ``f`` along the a-th basis vector."""
    return f.diff(basis_names(n)[a])


def _exprs(xs: Sequence) -> tuple[Expr, ...]:
    return tuple(Expr.coerce(x) for x in xs)


def _half(n2: int) -> int:
    if n2 % 2:
        raise ValueError("component count must be even (2n)")
    return n2 // 2


# --------------------------------------------------------------------------
# vector fields and one-forms


@dataclass(frozen=True)
class VectorField:
    """X = sum X^j d/dz_j + sum X^(n+k) d/dzb_k; the two blocks are independent."""

    components: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", _exprs(self.components))
        _half(len(self.components))

    @property
    def n(self) -> int:
        return len(self.components) // 2

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls((ZERO,) * (2 * n))

    @classmethod
    def basis(cls, a: int, n: int) -> "VectorField":
        return cls(tuple(ONE if b == a else ZERO for b in range(2 * n)))

    @classmethod
    def from_dict(cls, n: int, comps: Mapping[str, Expr]) -> "VectorField":
        """Build from ``{"z1": a, "zb1": b}`` meaning ``a d/dz1 + b d/dzb1``."""
        out = [ZERO] * (2 * n)
        for name, val in comps.items():
            out[basis_index(name, n)] = Expr.coerce(val)
        return cls(tuple(out))

    def __getitem__(self, a: int) -> Expr:
        return self.components[a]

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(x + y for x, y in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(x - y for x, y in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(tuple(-x for x in self.components))

    def scale(self, f) -> "VectorField":
        f = Expr.coerce(f)
        return VectorField(tuple(f * x for x in self.components))

    def __call__(self, f: Expr) -> Expr:
        """Directional derivative X(f)."""
        n = self.n
        total = ZERO
        for a, x in enumerate(self.components):
            if not x.is_zero():
                total = total + x * partial(f, a, n)
        return total

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.components)

    def is_holomorphic(self) -> bool:
        """Holomorphic block independent of every zb, antiholomorphic block of every z."""
        n = self.n
        for a, x in enumerate(self.components):
            for j in range(1, n + 1):
                v = coord(j, anti=a < n)
                if not x.diff(v).is_zero():
                    return False
        return True


@dataclass(frozen=True)
class OneForm:
    """alpha = sum alpha_j dz_j + sum alpha_(n+k) dzb_k."""

    components: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", _exprs(self.components))
        _half(len(self.components))

    @property
    def n(self) -> int:
        return len(self.components) // 2

    @classmethod
    def zero(cls, n: int) -> "OneForm":
        return cls((ZERO,) * (2 * n))

    @classmethod
    def basis(cls, a: int, n: int) -> "OneForm":
        return cls(tuple(ONE if b == a else ZERO for b in range(2 * n)))

    @classmethod
    def from_dict(cls, n: int, comps: Mapping[str, Expr]) -> "OneForm":
        out = [ZERO] * (2 * n)
        for name, val in comps.items():
            out[basis_index(name, n)] = Expr.coerce(val)
        return cls(tuple(out))

    def __getitem__(self, a: int) -> Expr:
        return self.components[a]

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(x + y for x, y in zip(self.components, other.components)))

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(x - y for x, y in zip(self.components, other.components)))

    def __neg__(self) -> "OneForm":
        return OneForm(tuple(-x for x in self.components))

    def scale(self, f) -> "OneForm":
        f = Expr.coerce(f)
        return OneForm(tuple(f * x for x in self.components))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.components)


def pair(alpha: OneForm, X: VectorField) -> Expr:
    """alpha(X)."""
    total = ZERO
    for x, y in zip(alpha.components, X.components):
        if not (x.is_zero() or y.is_zero()):
            total = total + x * y
    return total


# --------------------------------------------------------------------------
# bivectors and two-forms


def _skew_from(n: int, entries: Mapping[tuple[int, int], Expr]) -> Matrix:
    m = [[ZERO] * (2 * n) for _ in range(2 * n)]
    for (a, b), v in entries.items():
        m[a][b] = v
        m[b][a] = -v
    return tuple(tuple(r) for r in m)


@dataclass(frozen=True)
class Bivector11:
    """pi = sum_{j,k} B[j][k] d/dz_j ^ d/dzb_k."""

    B: Matrix

    def __post_init__(self):
        object.__setattr__(self, "B", as_matrix(self.B))
        n = len(self.B)
        if n < 1 or any(len(row) != n for row in self.B):
            raise ValueError("Bivector11 needs a square n x n coefficient matrix")

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def matrix(self) -> Matrix:
        """Realified skew matrix: pi^(j, n+k) = B_jk, pi^(n+k, j) = -B_jk."""
        n = self.n
        return _skew_from(n, {(j, n + k): self.B[j][k] for j in range(n) for k in range(n)})

    def __add__(self, other: "Bivector11") -> "Bivector11":
        return Bivector11(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.B, other.B)))

    def scale(self, f) -> "Bivector11":
        f = Expr.coerce(f)
        return Bivector11(tuple(tuple(f * x for x in r) for r in self.B))


@dataclass(frozen=True)
class GeneralBivector:
    """Skew 2n x 2n bivector; the Lie derivative of a (1,1) bivector lands here."""

    M: Matrix

    def __post_init__(self):
        object.__setattr__(self, "M", as_matrix(self.M))
        _half(len(self.M))
        if not is_skew(self.M):
            raise ValueError("bivector matrix is not skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.M) // 2

    @property
    def matrix(self) -> Matrix:
        return self.M

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.M for x in row)

    def nonzero(self) -> list[tuple[int, int, Expr]]:
        d = len(self.M)
        return [(a, b, self.M[a][b]) for a in range(d) for b in range(a + 1, d) if not self.M[a][b].is_zero()]


@dataclass(frozen=True)
class TwoForm:
    """omega = sum_{a<b} W[a][b] e^a ^ e^b with W skew."""

    W: Matrix

    def __post_init__(self):
        object.__setattr__(self, "W", as_matrix(self.W))
        _half(len(self.W))
        if not is_skew(self.W):
            raise ValueError("two-form matrix is not skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.W) // 2

    @classmethod
    def from_11(cls, C: Sequence[Sequence]) -> "TwoForm":
        """sum C_jk dz_j ^ dzb_k."""
        C = as_matrix(C)
        n = len(C)
        return cls(_skew_from(n, {(j, n + k): C[j][k] for j in range(n) for k in range(n)}))

    def is_11(self) -> bool:
        n = self.n
        return all(
            self.W[a][b].is_zero()
            for a in range(2 * n)
            for b in range(2 * n)
            if (a < n) == (b < n)
        )

    def __call__(self, X: VectorField, Y: VectorField) -> Expr:
        return bilinear(self.W, X, Y)


@dataclass(frozen=True)
class ThreeForm:
    """Components T_abc (a<b<c) of sum T_abc e^a ^ e^b ^ e^c; zeros omitted."""

    n: int
    components: Mapping[tuple[int, int, int], Expr] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.components.values())

    def __getitem__(self, abc: tuple[int, int, int]) -> Expr:
        return self.components.get(abc, ZERO)


def bilinear(M: Matrix, X: VectorField, Y: VectorField) -> Expr:
    total = ZERO
    for a, x in enumerate(X.components):
        if x.is_zero():
            continue
        for b, y in enumerate(Y.components):
            if not (y.is_zero() or M[a][b].is_zero()):
                total = total + M[a][b] * x * y
    return total


# --------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class HermitianMetric:
    """h = sum h_jk dz_j (x) dzb_k with a Hermitian coefficient matrix."""

    H: Matrix

    def __post_init__(self):
        object.__setattr__(self, "H", as_matrix(self.H))
        n = len(self.H)
        if n < 1 or any(len(row) != n for row in self.H):
            raise ValueError("Hermitian metric needs a square n x n matrix")

    @property
    def n(self) -> int:
        return len(self.H)

    def is_hermitian(self) -> bool:
        n = self.n
        return all(self.H[j][k].conjugate() == self.H[k][j] for j in range(n) for k in range(j, n))

    def non_hermitian_entries(self) -> list[tuple[int, int, Expr]]:
        n = self.n
        out = []
        for j in range(n):
            for k in range(j, n):
                r = self.H[j][k].conjugate() - self.H[k][j]
                if not r.is_zero():
                    out.append((j, k, r))
        return out

    @property
    def bilinear_matrix(self) -> Matrix:
        """Matrix of h as a bilinear form on real vectors.

        The antiholomorphic slot is filled by the first argument:
        h(X, Y) = sum h_jk X^(n+k) Y^j, i.e. h is conjugate-linear in X.
        This is the reading under which h = g + i omega holds together with
        omega = (i/2) sum h_jk dz_j ^ dzb_k.
        """
        n = self.n
        m = [[ZERO] * (2 * n) for _ in range(2 * n)]
        for j in range(n):
            for k in range(n):
                m[n + k][j] = self.H[j][k]
        return tuple(tuple(r) for r in m)

    def __call__(self, X: VectorField, Y: VectorField) -> Expr:
        return bilinear(self.bilinear_matrix, X, Y)


@dataclass(frozen=True)
class CotangentMetric:
    """g* over the cobasis (dz_1..dz_n, dzb_1..dzb_n): G[a][b] = g*(e^a, e^b)."""

    G: Matrix

    def __post_init__(self):
        object.__setattr__(self, "G", as_matrix(self.G))
        _half(len(self.G))
        if any(len(row) != len(self.G) for row in self.G):
            raise ValueError("cotangent metric must be a square 2n x 2n matrix")
        if not is_symmetric(self.G):
            raise ValueError("cotangent metric is not symmetric")

    @property
    def n(self) -> int:
        return len(self.G) // 2

    def __call__(self, alpha: OneForm, beta: OneForm) -> Expr:
        total = ZERO
        for a, x in enumerate(alpha.components):
            if x.is_zero():
                continue
            for b, y in enumerate(beta.components):
                if not (y.is_zero() or self.G[a][b].is_zero()):
                    total = total + self.G[a][b] * x * y
        return total


# --------------------------------------------------------------------------
# operations


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^a = sum_d (X^d d_d Y^a - Y^d d_d X^a)."""
    return VectorField(tuple(X(ya) - Y(xa) for xa, ya in zip(X.components, Y.components)))


@singledispatch
def d(obj):
    """Exterior derivative of a function, one-form or two-form."""
    raise TypeError(f"cannot take d of {type(obj).__name__}")


@d.register
def _(f: Expr, n: int | None = None) -> OneForm:
    if n is None:
        raise TypeError("d(f) needs the chart dimension n")
    return OneForm(tuple(f.diff(v) for v in basis_names(n)))


@d.register
def _(alpha: OneForm) -> TwoForm:
    n = alpha.n
    entries = {}
    for a, b in combinations(range(2 * n), 2):
        entries[a, b] = partial(alpha[b], a, n) - partial(alpha[a], b, n)
    return TwoForm(_skew_from(n, entries))


@d.register
def _(omega: TwoForm) -> ThreeForm:
    n = omega.n
    W = omega.W
    comps = {}
    for a, b, c in combinations(range(2 * n), 3):
        v = partial(W[b][c], a, n) + partial(W[c][a], b, n) + partial(W[a][b], c, n)
        if not v.is_zero():
            comps[a, b, c] = v
    return ThreeForm(n, comps)


def j_factor(a: int, n: int) -> Expr:
    """J multiplies the a-th (co)basis element by i (holomorphic) or -i."""
    return I if a < n else -I


@singledispatch
def apply_J(t):
    """Action of the standard complex structure (factor-wise on tensors)."""
    raise TypeError(f"cannot apply J to {type(t).__name__}")


@apply_J.register
def _(X: VectorField) -> VectorField:
    n = X.n
    return VectorField(tuple(j_factor(a, n) * x for a, x in enumerate(X.components)))


@apply_J.register
def _(alpha: OneForm) -> OneForm:
    n = alpha.n
    return OneForm(tuple(j_factor(a, n) * x for a, x in enumerate(alpha.components)))


@apply_J.register
def _(pi: Bivector11) -> Bivector11:
    # d/dz_j ^ d/dzb_k picks up i * (-i) = 1
    n = pi.n
    return Bivector11(
        tuple(tuple(j_factor(j, n) * j_factor(n + k, n) * pi.B[j][k] for k in range(n)) for j in range(n))
    )


def _apply_J_matrix(M: Matrix) -> Matrix:
    n = len(M) // 2
    return tuple(
        tuple(j_factor(a, n) * j_factor(b, n) * M[a][b] for b in range(2 * n)) for a in range(2 * n)
    )


@apply_J.register
def _(pi: GeneralBivector) -> GeneralBivector:
    return GeneralBivector(_apply_J_matrix(pi.M))


@apply_J.register
def _(omega: TwoForm) -> TwoForm:
    return TwoForm(_apply_J_matrix(omega.W))


def j_matrix(n: int) -> Matrix:
    """Matrix of J on vectors: (JX)^a = sum_b Jm[a][b] X^b."""
    return tuple(tuple(j_factor(a, n) if a == b else ZERO for b in range(2 * n)) for a in range(2 * n))


def nijenhuis(X: VectorField, Y: VectorField) -> VectorField:
    """N(X,Y) = [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY]."""
    JX, JY = apply_J(X), apply_J(Y)
    return lie_bracket(JX, JY) - lie_bracket(X, Y) - apply_J(lie_bracket(JX, Y)) - apply_J(lie_bracket(X, JY))


def bivector_matrix(pi) -> Matrix:
    if isinstance(pi, (Bivector11, GeneralBivector)):
        return pi.matrix
    raise TypeError(f"expected a bivector, got {type(pi).__name__}")


def pi_apply(pi, alpha: OneForm, beta: OneForm) -> Expr:
    """pi(alpha, beta) = sum pi^ab alpha_a beta_b."""
    P = bivector_matrix(pi)
    total = ZERO
    for a, x in enumerate(alpha.components):
        if x.is_zero():
            continue
        for b, y in enumerate(beta.components):
            if not (y.is_zero() or P[a][b].is_zero()):
                total = total + P[a][b] * x * y
    return total


def pi_sharp(pi, alpha: OneForm) -> VectorField:
    """pi_#(alpha) = pi(alpha, .), i.e. components sum_a alpha_a pi^ab."""
    P = bivector_matrix(pi)
    d2 = len(P)
    comps = []
    for b in range(d2):
        total = ZERO
        for a, x in enumerate(alpha.components):
            if not (x.is_zero() or P[a][b].is_zero()):
                total = total + x * P[a][b]
        comps.append(total)
    return VectorField(tuple(comps))


def interior(X: VectorField, omega: TwoForm) -> OneForm:
    """i_X omega = omega(X, .)."""
    n = omega.n
    return OneForm(
        tuple(sum((X[a] * omega.W[a][b] for a in range(2 * n)), ZERO) for b in range(2 * n))
    )

"""Contravariant Levi-Civita connection of a pair (g*, pi) and the tensor D pi."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from cpoisson.expr import ZERO, Expr, coord
from cpoisson.geometry import (
    Bivector11,
    CotangentMetric,
    OneForm,
    VectorField,
    basis_names,
    d,
    lie_bracket,
    pair,
    partial,
    pi_apply,
    pi_sharp,
)
from cpoisson.linalg import Matrix, SingularMatrixError, det, inverse, solve
from cpoisson.poisson import jacobi_tensor
from cpoisson.verdict import Verdict, combine


class DegenerateMetricError(ValueError):
    """The cotangent metric has an identically zero determinant."""


class ConnectionAxiomError(ArithmeticError):
    """The solved connection failed metricity or torsion-freeness."""


def _form_label(n: int, a: int) -> str:
    return "d" + basis_names(n)[a]


def lie_derivative_form(X: VectorField, gamma: OneForm) -> OneForm:
    """L_X gamma = d(gamma(X)) + i_X d gamma."""
    n = gamma.n
    dg = d(gamma).W
    ix = tuple(sum((X[a] * dg[a][b] for a in range(2 * n) if not X[a].is_zero()), ZERO) for b in range(2 * n))
    return d(pair(gamma, X), n) + OneForm(ix)


def koszul_bracket(pi: Bivector11, alpha: OneForm, beta: OneForm) -> OneForm:
    """[alpha, beta]_pi = L_{pi#alpha} beta - L_{pi#beta} alpha - d(pi(alpha, beta))."""
    n = pi.n
    return (
        lie_derivative_form(pi_sharp(pi, alpha), beta)
        - lie_derivative_form(pi_sharp(pi, beta), alpha)
        - d(pi_apply(pi, alpha, beta), n)
    )


def basis_koszul(pi: Bivector11, a: int, b: int) -> OneForm:
    """[e^a, e^b]_pi = d(pi^ab) for coordinate one-forms."""
    return d(pi.matrix[a][b], pi.n)


def sharp_derivative(pi: Bivector11, a: int, f: Expr) -> Expr:
    """pi_#(e^a) . f = sum_k pi^ak d_k f."""
    P = pi.matrix
    n = pi.n
    total = ZERO
    for k in range(2 * n):
        if not P[a][k].is_zero():
            total = total + P[a][k] * partial(f, k, n)
    return total


@dataclass(frozen=True)
class Connection:
    """Christoffel symbols with D_{e^a} e^b = sum_c gamma[a][b][c] e^c (0-based)."""

    gstar: CotangentMetric
    pi: Bivector11
    gamma: tuple[tuple[tuple[Expr, ...], ...], ...]

    @property
    def n(self) -> int:
        return self.pi.n

    def basis(self, a: int, b: int) -> OneForm:
        return OneForm(self.gamma[a][b])

    def christoffel(self, c: int, a: int, b: int) -> Expr:
        """Gamma^c_ab with 1-based indices, as printed in tables."""
        return self.gamma[a - 1][b - 1][c - 1]


def levi_civita(gstar: CotangentMetric, pi: Bivector11, verify: bool = True) -> Connection:
    """Solve the contravariant Koszul formula for every basis pair.

    2 g*(D_a b, c) = pi#(a).g*(b,c) + pi#(b).g*(a,c) - pi#(c).g*(a,b)
                     + g*([a,b],c) + g*([c,a],b) + g*([c,b],a)

    With ``verify`` the result is checked against metricity and
    torsion-freeness; a failure raises :class:`ConnectionAxiomError`.
    """
    n = pi.n
    if gstar.n != n:
        raise ValueError("metric and bivector live on charts of different dimension")
    dim = 2 * n
    G = gstar.G
    if det(G).is_zero():
        raise DegenerateMetricError("cotangent metric has identically zero determinant")
    brackets = {(a, b): basis_koszul(pi, a, b) for a in range(dim) for b in range(dim)}

    def g_form(alpha: OneForm, c: int) -> Expr:
        return sum((alpha[k] * G[k][c] for k in range(dim) if not alpha[k].is_zero()), ZERO)

    gamma = []
    for a in range(dim):
        row = []
        for b in range(dim):
            rhs = []
            for c in range(dim):
                r = (
                    sharp_derivative(pi, a, G[b][c])
                    + sharp_derivative(pi, b, G[a][c])
                    - sharp_derivative(pi, c, G[a][b])
                    + g_form(brackets[a, b], c)
                    + g_form(brackets[c, a], b)
                    + g_form(brackets[c, b], a)
                )
                rhs.append(r / 2)
            try:
                row.append(solve(G, rhs))
            except SingularMatrixError as exc:
                raise DegenerateMetricError(str(exc)) from exc
        gamma.append(tuple(row))
    conn = Connection(gstar, pi, tuple(gamma))
    if verify:
        v = connection_axioms(conn)
        if not v.passed:
            loc, val = v.witnesses[0]
            raise ConnectionAxiomError(f"connection axiom violated at {loc}: {val}")
    return conn


def metricity_residuals(conn: Connection):
    n = conn.n
    G = conn.gstar.G
    dim = 2 * n
    for a, b, c in product(range(dim), repeat=3):
        lhs = sharp_derivative(conn.pi, a, G[b][c])
        rhs = ZERO
        for k in range(dim):
            rhs = rhs + conn.gamma[a][b][k] * G[k][c] + conn.gamma[a][c][k] * G[b][k]
        label = ",".join(_form_label(n, x) for x in (a, b, c))
        yield f"metricity({label})", lhs - rhs


def torsion_residuals(conn: Connection):
    n = conn.n
    dim = 2 * n
    for a, b in combinations(range(dim), 2):
        br = basis_koszul(conn.pi, a, b)
        for c in range(dim):
            r = conn.gamma[a][b][c] - conn.gamma[b][a][c] - br[c]
            yield f"torsion({_form_label(n, a)},{_form_label(n, b)})[{_form_label(n, c)}]", r


def connection_axioms(conn: Connection) -> Verdict:
    """Metricity and torsion-freeness, exactly, on all basis forms."""
    return combine(
        [
            Verdict.from_residuals(metricity_residuals(conn)),
            Verdict.from_residuals(torsion_residuals(conn)),
        ]
    )


def cov_derive(conn: Connection, alpha: OneForm, beta: OneForm) -> OneForm:
    """D_alpha beta, extended off the basis.

    Function-linear in alpha; in beta, D_a(f e^b) = (pi#(e^a) f) e^b + f D_a e^b.
    """
    n = conn.n
    dim = 2 * n
    out = [ZERO] * dim
    for a in range(dim):
        if alpha[a].is_zero():
            continue
        comp = [ZERO] * dim
        for b in range(dim):
            if beta[b].is_zero():
                continue
            comp[b] = comp[b] + sharp_derivative(conn.pi, a, beta[b])
            for c in range(dim):
                g = conn.gamma[a][b][c]
                if not g.is_zero():
                    comp[c] = comp[c] + beta[b] * g
        for c in range(dim):
            out[c] = out[c] + alpha[a] * comp[c]
    return OneForm(tuple(out))


@dataclass(frozen=True)
class DPiTensor:
    """components[a][b][c] = (D_{e^a} pi)(e^b, e^c)."""

    n: int
    components: tuple[tuple[tuple[Expr, ...], ...], ...]

    def __call__(self, alpha: OneForm, beta: OneForm, gamma: OneForm) -> Expr:
        dim = 2 * self.n
        total = ZERO
        for a in range(dim):
            if alpha[a].is_zero():
                continue
            for b in range(dim):
                if beta[b].is_zero():
                    continue
                for c in range(dim):
                    v = self.components[a][b][c]
                    if not (gamma[c].is_zero() or v.is_zero()):
                        total = total + alpha[a] * beta[b] * gamma[c] * v
        return total

    def is_zero(self) -> bool:
        return all(v.is_zero() for plane in self.components for row in plane for v in row)

    def entries(self):
        dim = 2 * self.n
        for a, b, c in product(range(dim), repeat=3):
            yield (a, b, c), self.components[a][b][c]


def d_pi(conn: Connection, pi: Bivector11 | None = None) -> DPiTensor:
    """D_a pi(b, c) = pi#(e^a).pi^bc - pi(D_a e^b, e^c) - pi(e^b, D_a e^c)."""
    pi = conn.pi if pi is None else pi
    P = pi.matrix
    n = conn.n
    dim = 2 * n
    comps = []
    for a in range(dim):
        plane = []
        for b in range(dim):
            row = []
            for c in range(dim):
                v = sharp_derivative(conn.pi, a, P[b][c])
                for k in range(dim):
                    v = v - conn.gamma[a][b][k] * P[k][c] - conn.gamma[a][c][k] * P[b][k]
                row.append(v)
            plane.append(tuple(row))
        comps.append(tuple(plane))
    return DPiTensor(n, tuple(comps))


def dpi_label(n: int, a: int, b: int, c: int) -> str:
    f = lambda x: _form_label(n, x)  # noqa: E731
    return f"D_{f(a)} pi({f(b)},{f(c)})"


def is_riemann_poisson(gstar: CotangentMetric, pi: Bivector11, conn: Connection | None = None) -> Verdict:
    """Pass iff every component of D pi vanishes identically."""
    conn = conn or levi_civita(gstar, pi)
    T = d_pi(conn)
    n = pi.n
    return Verdict.from_residuals((dpi_label(n, a, b, c), v) for (a, b, c), v in T.entries() if b != c)


# --------------------------------------------------------------------------
# equivalent compatibility conditions


def condition2(conn: Connection, f: Expr, alpha: OneForm, beta: OneForm) -> Expr:
    """pi(D_alpha df, beta) + pi(alpha, D_beta df)."""
    df = d(Expr.coerce(f), conn.n)
    return pi_apply(conn.pi, cov_derive(conn, alpha, df), beta) + pi_apply(conn.pi, alpha, cov_derive(conn, beta, df))


def condition3(conn: Connection, alpha: OneForm, beta: OneForm, gamma: OneForm) -> Expr:
    """d gamma(pi#alpha, pi#beta) + pi(D_alpha gamma, beta) + pi(alpha, D_beta gamma)."""
    pi = conn.pi
    dg = d(gamma)
    return (
        dg(pi_sharp(pi, alpha), pi_sharp(pi, beta))
        + pi_apply(pi, cov_derive(conn, alpha, gamma), beta)
        + pi_apply(pi, alpha, cov_derive(conn, beta, gamma))
    )


def sweep_functions(n: int) -> list[tuple[str, Expr]]:
    """Test functions z_j, zb_j and z_j zb_k."""
    out = [(coord(j), Expr.symbol(coord(j))) for j in range(1, n + 1)]
    out += [(coord(j, True), Expr.symbol(coord(j, True))) for j in range(1, n + 1)]
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            out.append((f"{coord(j)}*{coord(k, True)}", Expr.symbol(coord(j)) * Expr.symbol(coord(k, True))))
    return out


def prop42_check(conn: Connection, which: int, *args) -> Verdict:
    """Evaluate condition 2 (args: f, alpha, beta) or 3 (args: alpha, beta, gamma)."""
    if which == 2:
        f, alpha, beta = args
        return Verdict.from_residuals([("condition-2", condition2(conn, f, alpha, beta))])
    if which == 3:
        alpha, beta, gamma = args
        return Verdict.from_residuals([("condition-3", condition3(conn, alpha, beta, gamma))])
    raise ValueError("which must be 2 or 3")


def condition2_sweep(conn: Connection) -> Verdict:
    n = conn.n
    dim = 2 * n
    res = []
    for label, f in sweep_functions(n):
        for a, b in combinations(range(dim), 2):
            r = condition2(conn, f, OneForm.basis(a, n), OneForm.basis(b, n))
            res.append((f"cond2(f={label},{_form_label(n, a)},{_form_label(n, b)})", r))
    return Verdict.from_residuals(res)


def condition3_sweep(conn: Connection) -> Verdict:
    n = conn.n
    dim = 2 * n
    res = []
    for a, b, c in product(range(dim), repeat=3):
        if a >= b:
            continue
        r = condition3(conn, OneForm.basis(a, n), OneForm.basis(b, n), OneForm.basis(c, n))
        res.append((f"cond3({_form_label(n, a)},{_form_label(n, b)},{_form_label(n, c)})", r))
    return Verdict.from_residuals(res)


def prop42_equivalence(conn: Connection) -> dict[str, Verdict]:
    """Verdicts of D pi = 0, the condition-2 sweep and the condition-3 sweep."""
    return {
        "riemann-poisson": is_riemann_poisson(conn.gstar, conn.pi, conn),
        "condition-2": condition2_sweep(conn),
        "condition-3": condition3_sweep(conn),
    }


# Cyclic sum of D pi over a basis triple equals CYCLIC_JACOBI_FACTOR times the
# Jacobi tensor component (fixed by the identity checked in remark42_identities).
CYCLIC_JACOBI_FACTOR = 2


def remark42_identities(conn: Connection) -> Verdict:
    """Torsion-derived identities relating D pi, the Koszul bracket and Jacobi.

    On basis forms a, b, c, with J the Jacobi tensor:

    * D pi(a;b,c) + D pi(b;c,a) + D pi(c;a,b) = CYCLIC_JACOBI_FACTOR * J(a,b,c)
    * D pi(c;a,b) = -dc(pi#a, pi#b) - pi(D_a c, b) - pi(a, D_b c) + J(c,a,b)
    * pi#(D_a b) - pi#(D_b a) = [pi#a, pi#b] - J(a,b,.)

    The Jacobi terms vanish exactly when pi is Poisson, which gives the
    familiar torsion-free identities.
    """
    n = conn.n
    dim = 2 * n
    pi = conn.pi
    T = d_pi(conn)
    J = jacobi_tensor(pi)
    lab = lambda *xs: ",".join(_form_label(n, x) for x in xs)  # noqa: E731
    res = []
    for a, b, c in combinations(range(dim), 3):
        cyc = T.components[a][b][c] + T.components[b][c][a] + T.components[c][a][b]
        res.append((f"cyclic({lab(a, b, c)})", cyc - CYCLIC_JACOBI_FACTOR * J[a, b, c]))
    for a, b, c in product(range(dim), repeat=3):
        ea, eb, ec = (OneForm.basis(x, n) for x in (a, b, c))
        r = T.components[c][a][b] + condition3(conn, ea, eb, ec) - J[c, a, b]
        res.append((f"dpi-expansion({lab(c, a, b)})", r))
    for a, b in combinations(range(dim), 2):
        ea, eb = OneForm.basis(a, n), OneForm.basis(b, n)
        lhs = pi_sharp(pi, conn.basis(a, b)) - pi_sharp(pi, conn.basis(b, a))
        rhs = lie_bracket(pi_sharp(pi, ea), pi_sharp(pi, eb))
        diff = lhs - rhs
        for k in range(dim):
            res.append((f"sharp-torsion({lab(a, b)})[{basis_names(n)[k]}]", diff[k] + J[a, b, k]))
    return Verdict.from_residuals(res)


def inverse_metric(g: Matrix) -> CotangentMetric:
    """Dual metric G^{-1} of a realified symmetric covariant metric."""
    try:
        return CotangentMetric(inverse(g))
    except SingularMatrixError as exc:
        raise DegenerateMetricError(str(exc)) from exc

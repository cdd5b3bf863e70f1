import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpoisson import ChartPoint, parse
from cpoisson.expr import sample_points
from cpoisson.geometry import Bivector11, VectorField, apply_J, d, pair
from cpoisson.numeric import Instantiation, agrees, bracket_numeric, jacobi_numeric, lie_derivative_numeric
from cpoisson.poisson import (
    bracket,
    hamiltonian_field,
    is_poisson_vector_field,
    j_invariance,
    jacobi_tensor,
    jacobi_verdict,
    jacobiator,
    lie_derivative_bivector,
    reality_check,
    schouten_components,
    xp1_check,
)
from cpoisson.verdict import FAIL, INDETERMINATE, PASS

from strategies import VARS1, VARS2, polynomials


def bivector(rows, n):
    return Bivector11([[parse(x, n) for x in r] for r in rows])


def vf(n, **comps):
    return VectorField.from_dict(n, {k: parse(v, n) for k, v in comps.items()})


CSTAR = bivector([["2i*z1*zb1"]], 1)
FAMILY = bivector([["c*z1*zb1"]], 1)
GENERIC = bivector([["P"]], 1)
EX31 = bivector([["2i*z1*zb1", "2i*z1*zb2"], ["2i*z2*zb1", "2i*z2*zb2"]], 2)
COUNTER = bivector([["1", "0"], ["0", "z1*zb1"]], 2)


class TestBracket:
    def test_examples(self):
        p = lambda s: parse(s, 1)  # noqa: E731
        assert bracket(CSTAR, p("z1"), p("zb1")) == p("2i*z1*zb1")
        assert bracket(EX31, parse("z1^2", 2), parse("z2^3", 2)).is_zero()
        assert bracket(CSTAR, p("z1*zb1"), p("z1")) == p("-2i*z1^2*zb1")

    def test_expanded_form(self):
        # sum B_jk (df/dz_j dg/dzb_k - df/dzb_k dg/dz_j)
        f, g = parse("z1*zb2 + z2^2", 2), parse("zb1*z2", 2)
        names = ("z1", "z2"), ("zb1", "zb2")
        expected = parse("0", 2)
        for j in range(2):
            for k in range(2):
                B = EX31.B[j][k]
                zj, zk = names[0][j], names[1][k]
                expected = expected + B * (f.diff(zj) * g.diff(zk) - f.diff(zk) * g.diff(zj))
        assert bracket(EX31, f, g) == expected

    def test_numeric_cross_check(self):
        f, g = parse("z1*zb1", 1), parse("z1", 1)
        value = bracket(CSTAR, f, g)
        inst = Instantiation(1)
        for pt in sample_points(1, 5, np.random.default_rng(0)):
            assert agrees(inst(value, pt), bracket_numeric(inst, CSTAR.matrix, f, g, pt))

    @given(polynomials(VARS2), polynomials(VARS2))
    def test_antisymmetry(self, f, g):
        assert bracket(EX31, f, g) == -bracket(EX31, g, f)

    @given(polynomials(VARS2), polynomials(VARS2), polynomials(VARS2))
    def test_leibniz(self, f, g, h):
        assert bracket(COUNTER, f * g, h) == f * bracket(COUNTER, g, h) + g * bracket(COUNTER, f, h)

    @given(polynomials(VARS2, 3), polynomials(VARS2, 3))
    def test_both_holomorphic_commute(self, f, g):
        hol = {"zb1": parse("0", 2), "zb2": parse("0", 2)}
        f, g = f.subs(hol), g.subs(hol)
        assert bracket(EX31, f, g).is_zero()


class TestHamiltonianField:
    def test_examples(self):
        assert hamiltonian_field(CSTAR, parse("z1", 1)) == vf(1, zb1="2i*z1*zb1")
        assert hamiltonian_field(CSTAR, parse("5 - 2i", 1)).is_zero()
        Xf = hamiltonian_field(CSTAR, parse("z1*zb1", 1))
        assert Xf == vf(1, z1="-2i*z1^2*zb1", zb1="2i*z1*zb1^2")
        assert Xf(parse("z1", 1)) == bracket(CSTAR, parse("z1*zb1", 1), parse("z1", 1))

    @given(polynomials(VARS2), polynomials(VARS2))
    def test_is_bracket(self, f, g):
        assert pair(d(g, 2), hamiltonian_field(EX31, f)) == bracket(EX31, f, g)

    @given(polynomials(VARS2), polynomials(VARS2))
    def test_derivation(self, f, g):
        lhs = hamiltonian_field(COUNTER, f * g)
        assert lhs == hamiltonian_field(COUNTER, g).scale(f) + hamiltonian_field(COUNTER, f).scale(g)

    @given(polynomials(VARS2, 3))
    def test_holomorphic_f_has_only_antiholomorphic_part(self, f):
        f = f.subs({"zb1": parse("0", 2), "zb2": parse("0", 2)})
        X = hamiltonian_field(EX31, f)
        assert X[0].is_zero() and X[1].is_zero()

    @pytest.mark.parametrize("pi", [EX31, FAMILY, CSTAR], ids=["example31", "family", "cstar"])
    def test_hamiltonian_fields_are_poisson_fields(self, pi):
        n = pi.n
        for f in ("z1", "zb1", "z1*zb1", "z1^2 + zb1") + (("z1*zb2 + z2",) if n == 2 else ()):
            X = hamiltonian_field(pi, parse(f, n))
            assert is_poisson_vector_field(X, pi).passed, f


def _full_jacobi(num, dim):
    """Antisymmetric dense array from the a<b<c numeric components."""
    T = np.zeros((dim,) * 3, dtype=complex)
    for (a, b, c), v in num.items():
        for (x, y, w), s in (((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1), ((b, a, c), -1), ((a, c, b), -1),
                             ((c, b, a), -1)):
            T[x, y, w] = s * v
    return T


class TestJacobi:
    def test_n1_always_vanishes(self):
        assert jacobi_tensor(GENERIC).is_zero()
        assert jacobiator(GENERIC, parse("z1^2", 1), parse("zb1*z1", 1), parse("P", 1)).is_zero()

    def test_example31(self):
        assert jacobi_tensor(EX31).is_zero()
        fs = [parse(s, 2) for s in ("z1", "zb1", "z1*zb2")]
        assert jacobiator(EX31, *fs).is_zero()

    def test_counterexample(self):
        p = lambda s: parse(s, 2)  # noqa: E731
        assert jacobiator(COUNTER, p("zb1"), p("z2"), p("zb2")) == p("-zb1")
        T = jacobi_tensor(COUNTER)
        # realified indices: z1=0, z2=1, zb1=2, zb2=3
        assert T[2, 1, 3] == p("-zb1")
        assert T[1, 2, 3] == p("zb1")
        # {z1, {z2, zb2}} = {z1, z1*zb1} = z1 is the conjugate-mirror component
        assert T.nonzero() == [((0, 1, 3), p("z1")), ((1, 2, 3), p("zb1"))]
        v = jacobi_verdict(COUNTER)
        assert v.status == FAIL
        assert v.witnesses == (("J(z1,z2,zb2)", p("z1")), ("J(zb1,z2,zb2)", p("-zb1")))
        inst = Instantiation(2)
        val = inst(jacobiator(COUNTER, p("zb1"), p("z2"), p("zb2")), ChartPoint((1, 1)))
        assert abs(val - (-1)) <= 1e-6

    def test_matches_schouten_expression(self):
        for pi in (COUNTER, EX31):
            T = jacobi_tensor(pi)
            assert all(T.components[k] == v for k, v in schouten_components(pi).items())

    def test_antisymmetry(self):
        T = jacobi_tensor(COUNTER)
        assert T[3, 2, 1] == -T[1, 2, 3]
        assert T[1, 1, 3].is_zero()

    @settings(max_examples=10)
    @given(polynomials(VARS2), polynomials(VARS2), polynomials(VARS2))
    def test_jacobiator_numeric_oracle(self, f, g, h):
        sym = jacobiator(COUNTER, f, g, h)
        inst = Instantiation(2)
        for pt in sample_points(2, 20, np.random.default_rng(42)):
            T = _full_jacobi(jacobi_numeric(inst, COUNTER.matrix, pt), 4)
            num = np.einsum("abc,a,b,c->", T, inst.grad(f, pt), inst.grad(g, pt), inst.grad(h, pt))
            assert agrees(inst(sym, pt), num)


class TestLieDerivative:
    def test_scaling_fields(self):
        for X in (vf(1, z1="k*z1"), vf(1, zb1="k*zb1"), vf(1, z1="k*z1", zb1="k*zb1")):
            assert lie_derivative_bivector(X, FAMILY).is_zero()

    def test_nonpoisson_field(self):
        L = lie_derivative_bivector(vf(1, z1="z1^2"), FAMILY)
        assert L.nonzero() == [(0, 1, parse("-c*z1^2*zb1", 1))]
        v = is_poisson_vector_field(vf(1, z1="z1^2"), FAMILY)
        assert v.status == FAIL
        assert v.witnesses[0][1] == parse("-c*z1^2*zb1", 1)

    def test_can_leave_type_11(self):
        # a field mixing z and zb directions produces a holo-holo block
        L2 = lie_derivative_bivector(vf(2, z1="zb2"), EX31)
        assert not L2.M[0][1].is_zero()

    def test_numeric_oracle(self):
        X = vf(2, z1="z1^2 + zb2", zb2="z2*zb1")
        L = lie_derivative_bivector(X, EX31)
        inst = Instantiation(2)
        for pt in sample_points(2, 20, np.random.default_rng(42)):
            Ln = lie_derivative_numeric(inst, X.components, EX31.matrix, pt)
            for a in range(4):
                for b in range(4):
                    assert agrees(inst(L.M[a][b], pt), Ln[a, b])


class TestXP1:
    def test_scaling_field_passes(self):
        res = xp1_check(vf(1, z1="k*z1", zb1="k*zb1"), FAMILY)
        assert res[0, 0].status == PASS and not res[0, 0].notes

    def test_weighted_holomorphic_field(self):
        pi = bivector([["z1*zb1"]], 1)
        assert xp1_check(vf(1, z1="zb1*z1*zb1"), pi)[0, 0].passed

    def test_failing_field(self):
        v = xp1_check(vf(1, z1="z1^2"), FAMILY)[0, 0]
        assert v.status == FAIL
        assert v.witnesses[0][1] == parse("1/(c*zb1)", 1)

    def test_zero_entry_is_indeterminate(self):
        res = xp1_check(vf(2, z1="z1"), COUNTER)
        assert res[0, 1].status == INDETERMINATE
        assert res[0, 0].status in (PASS, FAIL)

    def test_hypothesis_violation_is_noted(self):
        v = xp1_check(vf(1, z1="zb1"), CSTAR)[0, 0]
        assert any("not holomorphic" in note for note in v.notes)

    def test_consistent_with_lie_derivative(self):
        # holomorphic fields passing every pair are Poisson fields
        for X in (vf(1, z1="k*z1"), vf(1, zb1="k*zb1"), vf(1, z1="k*z1", zb1="k*zb1")):
            assert all(v.passed for v in xp1_check(X, FAMILY).values())
            assert is_poisson_vector_field(X, FAMILY).passed


class TestRealityAndJ:
    def test_reality_examples(self):
        assert reality_check(EX31).passed
        assert reality_check(bivector([["i"]], 1)).passed
        v = reality_check(bivector([["z1"]], 1))
        assert v.status == FAIL and v.witnesses[0][1] == parse("z1 + zb1", 1)

    def test_reality_of_family_depends_on_c(self):
        assert reality_check(FAMILY).status == FAIL
        assert reality_check(CSTAR).passed

    @settings(max_examples=10)
    @given(st.lists(polynomials(VARS2, 2, 3), min_size=4, max_size=4))
    def test_j_invariance(self, entries):
        pi = Bivector11([entries[:2], entries[2:]])
        assert apply_J(pi) == pi
        assert j_invariance(pi).passed

    def test_j_invariance_fails_off_type(self):
        L = lie_derivative_bivector(vf(2, z1="zb2"), EX31)
        assert j_invariance(L).status == FAIL

    @given(polynomials(VARS1))
    def test_n1_bivectors_are_j_invariant(self, b):
        assert j_invariance(Bivector11([[b]])).passed


def test_lie_derivative_closed_form():
    # [X, pi] = -c^2 |z|^4 (d_z(a/(c z zb)) + d_zb(b/(c z zb))) for X = a d/dz + b d/dzb
    X = vf(1, z1="A", zb1="Q")
    L = lie_derivative_bivector(X, FAMILY)
    p = lambda s: parse(s, 1)  # noqa: E731
    w = p("c*z1*zb1")
    expected = -(w * w) * ((p("A") / w).diff("z1") + (p("Q") / w).diff("zb1"))
    assert L.M[0][1] == expected

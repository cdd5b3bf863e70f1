import numpy as np
import pytest

from cpoisson import ChartPoint, parse
from cpoisson.expr import sample_points
from cpoisson.geometry import Bivector11
from cpoisson.linalg import identity
from cpoisson.numeric import (
    Instantiation,
    agrees,
    christoffel_numeric,
    connection_residual_numeric,
    d_two_form_numeric,
    j_numeric,
    relative_error,
)

PTS = sample_points(1, 20, np.random.default_rng(42))


def test_tolerance_rule():
    assert agrees(1 + 1e-7, 1)
    assert not agrees(1 + 1e-5, 1)
    assert agrees(1e-7, 0)
    assert agrees(1000 * (1 + 5e-7), 1000)
    assert relative_error(2, 1) == 1.0


def test_instantiation_is_seeded_and_conjugate_consistent():
    exprs = [parse("c*P + Pb_zb1", 1)]
    a = Instantiation.random(1, exprs, np.random.default_rng(5))
    b = Instantiation.random(1, exprs, np.random.default_rng(5))
    assert a.constants == b.constants and a.functions == b.functions
    assert a.constants["cb"] == a.constants["c"].conjugate()
    assert a.functions["Pb"] == a.functions["P"].conjugate()
    pt = ChartPoint((0.7 + 0.4j,))
    # Pb evaluated at z is the conjugate of P, as a function of (z, zb)
    assert a(parse("Pb", 1), pt) == pytest.approx(a(parse("P", 1), pt).conjugate())


def test_jets_match_finite_differences():
    inst = Instantiation.random(1, [parse("P", 1)], np.random.default_rng(1))
    P = parse("P", 1)
    for pt in PTS:
        assert agrees(inst(parse("P_z1", 1), pt), inst.fd(P, 0, pt))
        assert agrees(inst(parse("P_zb1", 1), pt), inst.fd(P, 1, pt))
        assert agrees(inst(parse("P_z1zb1", 1), pt), inst.fd(parse("P_zb1", 1), 0, pt))


def test_symbolic_derivatives_of_generic_expressions():
    e = parse("P^2/zb1 + c*z1*Pb", 1)
    inst = Instantiation.random(1, [e], np.random.default_rng(2))
    for v, a in (("z1", 0), ("zb1", 1)):
        de = e.diff(v)
        for pt in PTS:
            assert agrees(inst(de, pt), inst.fd(e, a, pt))


def test_christoffel_oracle_flat():
    # constant metric: Gamma only carries the torsion half, d(pi^ab)/2 solved through G
    pi = Bivector11([[parse("z1*zb2", 2), parse("0", 2)], [parse("zb1", 2), parse("1", 2)]])
    inst = Instantiation(2)
    G = identity(4)
    for pt in sample_points(2, 5, np.random.default_rng(0)):
        gamma = christoffel_numeric(inst, G, pi.matrix, pt)
        assert connection_residual_numeric(inst, G, pi.matrix, gamma, pt) < 1e-8
        bad = gamma.copy()
        bad[0, 0, 0] += 1
        assert connection_residual_numeric(inst, G, pi.matrix, bad, pt) > 0.1


def test_d_two_form_oracle():
    W = ((parse("0", 1), parse("z1^2*zb1", 1)), (parse("-z1^2*zb1", 1), parse("0", 1)))
    assert d_two_form_numeric(Instantiation(1), W, PTS[0]) == {}


def test_j_numeric():
    J = j_numeric(2)
    assert np.allclose(J @ J, -np.eye(4))

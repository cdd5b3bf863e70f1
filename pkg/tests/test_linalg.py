import pytest

from cpoisson import parse
from cpoisson.linalg import SingularMatrixError, det, identity, inverse, is_skew, is_symmetric, matmul, solve, transpose


def M(rows, n=2):
    return tuple(tuple(parse(x, n) for x in r) for r in rows)


A = M([["z1", "1"], ["zb1", "z1*zb2"]])


def test_inverse_roundtrip():
    assert matmul(A, inverse(A)) == identity(2)
    assert matmul(inverse(A), A) == identity(2)


def test_det():
    assert det(A) == parse("z1^2*zb2 - zb1", 2)
    assert det(identity(3)) == parse("1", 2)
    assert det(M([["z1", "z1"], ["zb1", "zb1"]])).is_zero()


def test_det_with_pivoting():
    B = M([["0", "1"], ["z1", "0"]])
    assert det(B) == parse("-z1", 2)
    assert inverse(B) == M([["0", "1/z1"], ["1", "0"]])


def test_solve():
    x = solve(A, (parse("1", 2), parse("0", 2)))
    assert matmul(A, tuple((v,) for v in x)) == M([["1"], ["0"]])


def test_singular():
    with pytest.raises(SingularMatrixError):
        inverse(M([["z1", "2*z1"], ["zb2", "2*zb2"]]))


def test_symmetry_predicates():
    S = M([["z1", "zb1"], ["zb1", "1"]])
    K = M([["0", "z2"], ["-z2", "0"]])
    assert is_symmetric(S) and not is_skew(S)
    assert is_skew(K) and not is_symmetric(K)
    assert transpose(K) == M([["0", "-z2"], ["z2", "0"]])

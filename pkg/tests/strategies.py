"""Hypothesis strategies for random rational expressions and fields."""

from hypothesis import strategies as st

from cpoisson import Expr
from cpoisson.geometry import OneForm, VectorField

VARS1 = ("z1", "zb1")
VARS2 = ("z1", "zb1", "z2", "zb2")

gaussian = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda t: complex(*t))


def _build(terms):
    total = Expr.const(0)
    for c, mono in terms:
        m = Expr.const(c)
        for v in mono:
            m = m * Expr.symbol(v)
        total = total + m
    return total


def polynomials(variables=VARS2, max_degree=2, max_terms=4):
    mono = st.lists(st.sampled_from(variables), max_size=max_degree)
    return st.lists(st.tuples(gaussian, mono), min_size=1, max_size=max_terms).map(_build)


def rationals(variables=VARS2, max_degree=2):
    num = polynomials(variables, max_degree)
    den = polynomials(variables, max_degree).filter(lambda p: not p.is_zero())
    return st.tuples(num, den).map(lambda t: t[0] / t[1])


def vector_fields(n=2, max_degree=2):
    variables = VARS1 if n == 1 else VARS2
    return st.lists(polynomials(variables, max_degree, 3), min_size=2 * n, max_size=2 * n).map(
        lambda cs: VectorField(tuple(cs))
    )


def one_forms(n=2, max_degree=2):
    variables = VARS1 if n == 1 else VARS2
    return st.lists(polynomials(variables, max_degree, 3), min_size=2 * n, max_size=2 * n).map(
        lambda cs: OneForm(tuple(cs))
    )

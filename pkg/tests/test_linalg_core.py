"""Exact arithmetic, alternating forms and metrics."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from g2check.errors import ContractError, DimensionError, NotRationalError, RankDeficiencyError, SingularMetricError
from g2check.linalg_core import (
    AltForm,
    Metric,
    basis,
    det,
    evaluate,
    exact_array,
    gram,
    interior,
    inv,
    is_exact,
    matmul,
    max_abs,
    orthonormalize,
    permutation_sign,
    root_exact,
    solve,
    sqrt_exact,
    wedge,
)


# ---------------------------------------------------------------- oracles

def multilinear(form: AltForm, vs) -> Fraction:
    """Evaluate a form as the alternating multilinear map sum_I a_I sum_sigma sgn * prod v_sigma(k)[I_k].

    Independent of the library's determinant-based evaluate().
    """
    total = Fraction(0)
    k = form.degree
    for idx, coeff in form.terms().items():
        for perm in itertools.permutations(range(k)):
            term = Fraction(permutation_sign(perm))
            for slot, p in enumerate(perm):
                term *= vs[p][idx[slot]]
            total += coeff * term
    return total


def antisymmetrized_wedge(a: AltForm, b: AltForm, vs) -> Fraction:
    """(a ^ b)(v_1..v_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) a(v_sigma...) b(v_sigma...)."""
    p, q = a.degree, b.degree
    total = Fraction(0)
    for perm in itertools.permutations(range(p + q)):
        s = permutation_sign(perm)
        total += s * multilinear(a, [vs[i] for i in perm[:p]]) * multilinear(b, [vs[i] for i in perm[p:]])
    return total / (math.factorial(p) * math.factorial(q))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def rational_vectors(dim, count):
    return st.lists(st.lists(rationals, min_size=dim, max_size=dim), min_size=count, max_size=count).map(
        lambda rows: [exact_array(r) for r in rows])


def random_form(dim, k):
    idx = list(itertools.combinations(range(dim), k))
    return st.lists(st.integers(-3, 3), min_size=len(idx), max_size=len(idx)).map(
        lambda cs: AltForm.from_terms(dim, k, dict(zip(idx, cs))))


# ---------------------------------------------------------------- scalars

def test_roots_are_exact_or_refuse():
    assert root_exact(Fraction(8, 27), 3) == Fraction(2, 3)
    assert root_exact(Fraction(-1, 512), 9) == Fraction(-1, 2)
    assert sqrt_exact(Fraction(49, 4)) == Fraction(7, 2)
    with pytest.raises(NotRationalError):
        sqrt_exact(Fraction(2))


def test_exact_linear_algebra_round_trips():
    m = exact_array([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert det(m) == 18
    mi = inv(m)
    assert is_exact(mi)
    assert max_abs(mi @ m - exact_array(np.eye(3, dtype=int))) == 0
    x = solve(m, exact_array([1, 2, 3]))
    assert max_abs(m @ x - exact_array([1, 2, 3])) == 0


def test_matmul_matches_dense_product():
    rng = np.random.default_rng(3)
    a = exact_array([[Fraction(int(v)) for v in row] for row in rng.integers(-2, 3, (4, 5))])
    b = exact_array([[Fraction(int(v)) for v in row] for row in rng.integers(-2, 3, (5, 3))])
    assert max_abs(matmul(a, b) - a @ b) == 0
    assert max_abs(matmul(a[0], b) - a[0] @ b) == 0
    assert max_abs(matmul(a, b[:, 0]) - a @ b[:, 0]) == 0


# ---------------------------------------------------------------- forms

def test_wedge_with_permutation_sign():
    a = AltForm.from_terms(8, 3, {(0, 1, 6): 1})
    b = AltForm.from_terms(8, 3, {(2, 3, 4): 1})
    w = wedge(a, b)
    # x^7 moves past x^3, x^4, x^5: three transpositions
    assert w.terms() == {(0, 1, 2, 3, 4, 6): -1}
    # oracle: brute-force antisymmetrization on the basis vectors
    e = basis(8)
    vs = [e[i] for i in (0, 1, 2, 3, 4, 6)]
    assert antisymmetrized_wedge(a, b, vs) == -1


def test_interior_product_example():
    form = AltForm.from_terms(7, 3, {(0, 1, 6): 1})
    e = basis(7)
    out = interior(e[1], form)
    assert out.terms() == {(0, 6): -1}
    # oracle: a(e2, e1, e7) evaluated multilinearly
    assert multilinear(form, [e[1], e[0], e[6]]) == -1


def test_from_terms_sorts_with_sign():
    f = AltForm.from_terms(4, 2, {(1, 0): 1})
    assert f[(0, 1)] == -1
    assert f[(1, 0)] == 1


def test_degree_overflow_is_rejected():
    a = AltForm.from_terms(3, 2, {(0, 1): 1})
    with pytest.raises(ContractError):
        wedge(a, a)


def test_evaluate_arity_mismatch():
    a = AltForm.from_terms(3, 2, {(0, 1): 1})
    with pytest.raises(ContractError):
        evaluate(a, basis(3))


@settings(max_examples=40, deadline=None)
@given(random_form(5, 2), random_form(5, 2), rational_vectors(5, 4))
def test_wedge_matches_antisymmetrization(a, b, vs):
    assert evaluate(wedge(a, b), vs) == antisymmetrized_wedge(a, b, vs)


@settings(max_examples=40, deadline=None)
@given(random_form(5, 3), rational_vectors(5, 3))
def test_evaluate_matches_multilinear_oracle(a, vs):
    assert evaluate(a, vs) == multilinear(a, vs)


@settings(max_examples=40, deadline=None)
@given(random_form(5, 2), random_form(5, 1))
def test_graded_commutativity(a, b):
    # deg 2 and deg 1 commute
    assert wedge(a, b) == wedge(b, a)
    assert wedge(b, b).is_zero()


@settings(max_examples=30, deadline=None)
@given(random_form(5, 1), random_form(5, 2), random_form(5, 1))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@settings(max_examples=30, deadline=None)
@given(random_form(6, 3), rational_vectors(6, 3))
def test_interior_is_first_slot_evaluation(a, vs):
    assert evaluate(interior(vs[0], a), vs[1:]) == evaluate(a, vs)


@settings(max_examples=30, deadline=None)
@given(random_form(5, 2), random_form(5, 1), rational_vectors(5, 1))
def test_interior_is_antiderivation(a, b, v):
    v = v[0]
    lhs = interior(v, wedge(a, b))
    rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b))
    assert lhs == rhs


# ---------------------------------------------------------------- metrics

def test_metric_rejects_singular_or_asymmetric():
    with pytest.raises(SingularMetricError):
        Metric(exact_array([[1, 0], [0, 0]]))
    with pytest.raises(ContractError):
        Metric(exact_array([[1, 1], [0, 1]]))


def test_orthonormalize_example_float():
    # exact mode would need sqrt(2); see the rank/irrational test below
    g = Metric.euclidean(3, exact=False)
    vs = [np.array([1.0, 1.0, 0.0]), np.array([0.0, 1.0, 0.0])]
    out = orthonormalize(vs, g)
    assert np.allclose(gram(out, g), np.eye(2), atol=1e-14)
    assert np.allclose(out[0], np.array([1.0, 1.0, 0.0]) / math.sqrt(2))


def test_orthonormalize_exact_needs_rational_norms():
    g = Metric.euclidean(3, exact=True)
    out = orthonormalize([exact_array([3, 4, 0]), exact_array([0, 0, 2])], g)
    assert max_abs(gram(out, g) - exact_array(np.eye(2, dtype=int))) == 0
    with pytest.raises(NotRationalError):
        orthonormalize([exact_array([1, 1, 0])], g)


def test_orthonormalize_names_dependent_index():
    g = Metric.euclidean(3, exact=False)
    with pytest.raises(RankDeficiencyError) as info:
        orthonormalize([np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([1.0, 1.0, 0])], g)
    assert info.value.index == 2


def test_dimension_error_is_contract_error():
    assert issubclass(DimensionError, ContractError)

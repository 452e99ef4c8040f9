"""Quaternionic structure on R^8 and its Kähler forms."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from g2check.errors import StructureInvalidError
from g2check.hyperkahler import (
    QuaternionicStructure,
    kahler_forms,
    orthonormal_quadruple_residual,
    standard_structures,
    validate_structure,
)
from g2check.linalg_core import Metric, exact_array, permutation_sign


# Hamilton's table as an independent oracle: products of the units 1, i, j, k
HAMILTON = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}
UNITS = "1ijk"


def hamilton_left(unit: str) -> np.ndarray:
    m = np.zeros((8, 8), dtype=int)
    for block in (0, 4):
        for col, u in enumerate(UNITS):
            s, w = HAMILTON[(unit, u)]
            m[block + UNITS.index(w), block + col] = s
    return m


def test_matrices_match_hamilton_table():
    q = standard_structures()
    for J, unit in zip(q.J, "ijk"):
        assert np.array_equal(J.astype(int), hamilton_left(unit))


def test_j1_e1_is_e2():
    J1 = standard_structures()[0]
    e1 = exact_array([1, 0, 0, 0, 0, 0, 0, 0])
    assert list(J1 @ e1) == [0, 1, 0, 0, 0, 0, 0, 0]


def test_normal_images_used_by_the_torus_frame():
    J = standard_structures().J
    e8 = exact_array([0] * 7 + [1])
    assert list(J[0] @ e8) == [0, 0, 0, 0, 0, 0, -1, 0]
    assert list(J[1] @ e8) == [0, 0, 0, 0, 0, 1, 0, 0]
    assert list(J[2] @ e8) == [0, 0, 0, 0, -1, 0, 0, 0]


def test_quaternion_relations_exact():
    rep = validate_structure(standard_structures())
    assert rep.valid
    assert all(v == 0 for v in rep.residuals.values())


def test_corrupted_structure_is_reported_not_raised():
    q = standard_structures()
    bad = q.J[0].copy()
    bad[0, 1] = Fraction(5)
    rep = validate_structure(QuaternionicStructure((bad, q.J[1], q.J[2])))
    assert not rep.valid
    assert rep.residuals["J1^2+I"] != 0


def test_kahler_form_omega1():
    kf = kahler_forms(standard_structures(), Metric.euclidean(8))
    pairs = {(0, 1): 1, (2, 3): 1, (4, 5): 1, (6, 7): 1}
    assert kf[0].terms() == pairs


def brute_top_power(pairs: dict) -> Fraction:
    """omega^4(e1..e8) by summing over S_8, with omega as an antisymmetric matrix.

    For a 2-form, omega^4(v_1..v_8) = 1/2^4 sum_sigma sgn prod omega(v_s(2k), v_s(2k+1)).
    """
    W = np.zeros((8, 8), dtype=int)
    for (a, b), c in pairs.items():
        W[a, b], W[b, a] = c, -c
    total = 0
    for perm in itertools.permutations(range(8)):
        prod = W[perm[0], perm[1]] * W[perm[2], perm[3]] * W[perm[4], perm[5]] * W[perm[6], perm[7]]
        if prod:
            total += permutation_sign(perm) * prod
    return Fraction(total, 2 ** 4)


def test_kahler_top_power_matches_brute_force():
    kf = kahler_forms(standard_structures(), Metric.euclidean(8))
    expected = brute_top_power(kf[0].terms())
    assert expected == 24 == math.factorial(4)
    for i in range(3):
        assert kf.top_power(i).coeffs[0] == expected
    assert kf.nondegenerate()


def test_kahler_form_needs_compatible_metric():
    g = Metric(exact_array(np.diag([1, 2, 1, 1, 1, 1, 1, 1])))
    with pytest.raises(StructureInvalidError):
        kahler_forms(standard_structures(), g)


def test_wrong_shape_rejected():
    with pytest.raises(StructureInvalidError):
        QuaternionicStructure((np.eye(8),) * 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=8, max_size=8))
def test_quadruple_orthogonal_for_any_vector(xs):
    assert orthonormal_quadruple_residual(standard_structures(), exact_array(xs)) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=8, max_size=8),
       st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=8, max_size=8))
def test_structures_are_isometries(xs, ys):
    u, v = exact_array(xs), exact_array(ys)
    for J in standard_structures().J:
        assert (J @ u) @ (J @ v) == u @ v
        assert (J @ u) @ v == -(u @ (J @ v))

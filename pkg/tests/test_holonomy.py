"""Induced cross product, X/Y tensors, the final residuals and both routes to nabla P."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from g2check import holonomy as H
from g2check.errors import FrameError, FrameSmoothnessError
from g2check.g2 import CrossProduct, check_cross_axioms
from g2check.hyperkahler import standard_structures
from g2check.hypersurface import CATALOG, make_immersion, point_frame, sample_points, sphere, torus_hyperplane
from g2check.linalg_core import Metric, max_abs

Q = standard_structures()
E7 = np.eye(7)


@pytest.fixture(scope="module")
def torus_pf():
    return point_frame(torus_hyperplane(), [Fraction(2, 9)] * 7, q=Q, exact=True)


@pytest.fixture(scope="module")
def sphere_pts():
    return sample_points(sphere(), 10, seed=3)


# ---------------------------------------------------------------- induced cross product

def test_induced_cross_table_on_torus(torus_pf):
    P = H.induced_cross(torus_pf.frame, Q)
    assert P.exact
    e = np.eye(7, dtype=int)
    # cyclic pairs carry the sign that makes the table a G2 product
    assert list(P(e[0], e[1])) == list(-e[2])
    assert list(P(e[1], e[2])) == list(-e[0])
    assert list(P(e[0], e[3])) == list(e[4])
    assert list(P(e[3], e[4])) == list(e[0])
    assert list(P(e[3], e[6])) == list(e[2])
    rep = check_cross_axioms(P.as_cross_product())
    assert all(r == 0 for r in rep.residuals.values())


def test_positive_cyclic_sign_is_not_a_cross_product(torus_pf):
    """Flip P(xi_i, xi_j) to +xi_k: basis pairs still pass, random pairs do not."""
    T = H.induced_cross(torus_pf.frame, Q).table.copy()
    for i, j, k in H.CYCLIC:
        T[i, j] = -T[i, j]
        T[j, i] = -T[j, i]
    rep = check_cross_axioms(CrossProduct(T, Metric.euclidean(7)))
    assert rep.double_cross != 0
    assert "double_cross" in rep.failing and rep.failing["double_cross"].kind == "random"


def test_non_adapted_frame_rejected(torus_pf):
    # rotating xi_4 towards xi_1 keeps the frame orthonormal but leaves the J-invariant span
    frame = np.asarray(torus_pf.frame, dtype=float).copy()
    c = np.cos(0.3)
    s = np.sin(0.3)
    frame[:, 0], frame[:, 3] = c * frame[:, 0] - s * frame[:, 3], s * frame[:, 0] + c * frame[:, 3]
    with pytest.raises(FrameError):
        H.induced_cross(frame, Q)


def test_relabeling_inside_the_quaternionic_span_is_harmless(torus_pf):
    # the rules only see the J-invariant span, not the order of its basis
    frame = torus_pf.frame.copy()
    frame[:, [4, 5]] = frame[:, [5, 4]]
    P = H.induced_cross(frame, Q)
    assert all(r == 0 for r in check_cross_axioms(P.as_cross_product()).residuals.values())


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(CATALOG)), st.integers(0, 10_000))
def test_induced_cross_satisfies_axioms_everywhere(name, seed):
    imm = make_immersion(name)
    pf = point_frame(imm, sample_points(imm, 1, seed)[0], q=Q)
    P = H.induced_cross(pf.frame, Q)
    assert check_cross_axioms(P.as_cross_product()).passed(1e-10)
    # antisymmetric table
    assert np.abs(P.table + P.table.transpose(1, 0, 2)).max() == 0


# ---------------------------------------------------------------- X and Y

def test_torus_tensors_vanish_exactly(torus_pf):
    ft = H.frame_tensors(torus_pf, Q)
    assert max_abs(ft.X) == 0 and max_abs(ft.Y) == 0 and max_abs(ft.H) == 0
    for i in range(3):
        for m in range(7):
            assert max_abs(H.x_tensor(torus_pf, Q, i, m)) == 0
            assert max_abs(H.y_tensor(torus_pf, Q, i, m, 3)) == 0


def test_sphere_x_is_tangential_j(sphere_pts):
    """Umbilic oracle: dn(xi) = xi on the outward unit sphere, so X_i(xi) = tan(J_i xi)."""
    for u in sphere_pts[:3]:
        pf = point_frame(sphere(), u, q=Q)
        for i in range(3):
            for m in range(7):
                w = Q.matrices(False)[i] @ pf.frame[:, m]
                expected = w - (w @ pf.n) * pf.n
                assert np.allclose(H.x_tensor(pf, Q, i, m), expected, atol=1e-13)
                # the normal part is h(xi_i, xi_m) = -delta_im
                assert H.x_normal_part(pf, Q, i, m) == pytest.approx(-float(i == m), abs=1e-13)


def test_sphere_y_example(sphere_pts):
    pf = point_frame(sphere(), sphere_pts[0], q=Q)
    # h = -g, so Y_1(xi_4, xi_4) = h(xi_4, xi_4) xi_1 - h(xi_4, xi_5) n = -xi_1
    y = H.y_tensor(pf, Q, 0, 3, 3)
    assert np.allclose(y, -pf.frame[:, 0], atol=1e-13)
    assert np.linalg.norm(y) == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 6), st.integers(3, 6),
       st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False))
def test_x_linear_y_bilinear(i, m, a, s, t):
    imm = make_immersion("graph-quadratic")
    pf = point_frame(imm, sample_points(imm, 1, seed=1)[0], q=Q)
    xi = E7[m]
    assert np.allclose(H.x_tensor(pf, Q, i, s * xi), s * H.x_tensor(pf, Q, i, m), atol=1e-12)
    assert np.allclose(H.y_tensor(pf, Q, i, s * xi, t * E7[a]), s * t * H.y_tensor(pf, Q, i, m, a), atol=1e-12)


def test_frame_tensors_match_ambient_routines():
    imm = make_immersion("graph-fourier")
    pf = point_frame(imm, sample_points(imm, 1, seed=4)[0], q=Q)
    ft = H.frame_tensors(pf, Q)
    for i in range(3):
        for m in range(7):
            assert np.allclose(pf.frame @ ft.X[i, m], H.x_tensor(pf, Q, i, m), atol=1e-13)
            for a in range(3, 7):
                y = H.y_tensor(pf, Q, i, m, a)
                assert np.allclose(pf.frame @ ft.Y[i, m, a] + ft.Y_normal[i, m, a] * pf.n, y, atol=1e-13)
    # the normal part of J_i dn(xi_m) is the Gauss correction h(xi_i, xi_m)
    assert np.abs(ft.X_normal - ft.H[:3]).max() < 1e-13


# ---------------------------------------------------------------- final residuals

def test_torus_residuals_zero_exact(torus_pf):
    res = H.final_residuals(torus_pf, Q, tol=1e-8)
    assert res.r_final1 == 0 and res.r_final2 == 0 and res.r_nablaP_closed == 0
    assert res.verdict == H.PARALLEL


def test_sphere_final2_hand_value(sphere_pts):
    """xi = xi_6, eta = xi_4, i = 1: Y_1 = h(xi_6, xi_4) xi_1 = 0 and X_1(xi_6) = J1 J2 xi_4 = xi_7.

    P(xi_7, xi_4) = -P(xi_4, J3 xi_4) = -xi_3, so the residual there is exactly 1.
    """
    pf = point_frame(sphere(), sphere_pts[0], q=Q)
    P = H.induced_cross(pf.frame, Q)
    ft = H.frame_tensors(pf, Q)
    terms = np.asarray(H.final2_terms(ft, P), dtype=float)
    slot = terms[5, 0, 0]
    assert np.allclose(slot, E7[2], atol=1e-13)
    res = H.final_residuals(pf, Q, tol=1e-8)
    assert res.r_final2 >= 1 - 1e-12
    assert res.verdict == H.NOT_PARALLEL


@pytest.mark.parametrize("radius", [0.5, 2.0, 4.0])
def test_sphere_residual_scales_with_curvature(radius):
    imm = sphere(radius=radius)
    pf = point_frame(imm, sample_points(imm, 1, seed=9)[0], q=Q)
    res = H.final_residuals(pf, Q, tol=1e-8)
    assert float(res.r_final2) == pytest.approx(1 / radius, rel=1e-12)


def test_calc2_and_calc3_bitwise_equal():
    imm = make_immersion("graph-fourier")
    pf = point_frame(imm, sample_points(imm, 1, seed=8)[0], q=Q)
    P = H.induced_cross(pf.frame, Q)
    ft = H.frame_tensors(pf, Q)
    assert np.array_equal(H.calc2(ft, P), H.calc3(ft, P))


def test_closed_form_vanishes_when_x_does():
    """Sufficiency direction: zero X (hence zero Y on a flat piece) forces zero nabla P."""
    pf = point_frame(make_immersion("graph-quadratic", {"matrix": np.zeros((7, 7)).tolist()}),
                     np.full(7, 0.1), q=Q)
    res = H.final_residuals(pf, Q, tol=1e-8)
    assert res.r_final1 == 0 and res.r_final2 == 0 and res.r_nablaP_closed == 0


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(CATALOG)), st.integers(0, 10_000))
def test_sufficiency_property(name, seed):
    imm = make_immersion(name)
    tol = 1e-8
    pf = point_frame(imm, sample_points(imm, 1, seed)[0], q=Q)
    res = H.final_residuals(pf, Q, tol)
    if res.r_final1 <= tol and res.r_final2 <= tol:
        assert res.r_nablaP_closed <= 10 * tol


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 10), st.floats(1e-9, 1), st.floats(1e-12, 1e-3))
def test_verdict_monotone_in_tolerance(r, tol_small, floor):
    tol_large = tol_small * 1e3
    if H.classify(r, tol_small, floor) == H.PARALLEL:
        assert H.classify(r, tol_large, floor) == H.PARALLEL


def test_inconclusive_band():
    assert H.classify(5e-8, 1e-8, 1e-8) == H.INCONCLUSIVE
    assert H.classify(5e-6, 1e-8, 1e-8) == H.NOT_PARALLEL


# ---------------------------------------------------------------- finite differences

def test_torus_fd_vanishes():
    imm = torus_hyperplane()
    for u in sample_points(imm, 5, seed=1):
        assert H.nabla_p_fd(imm, u, 1e-4, Q) <= 1e-10
        assert H.nabla_p_fd(imm, u, 1e-4, Q, full=True) <= 1e-10


@pytest.mark.parametrize("name", ["sphere", "graph-quadratic", "graph-fourier"])
def test_fd_tensor_matches_closed_form_second_order(name):
    imm = make_immersion(name)
    u = sample_points(imm, 1, seed=5)[0]
    pf = point_frame(imm, u, q=Q)
    closed = np.asarray(H.closed_nabla_p_slots(H.frame_tensors(pf, Q), H.induced_cross(pf.frame, Q)), dtype=float)
    errs = [np.abs(H.nabla_p_fd_tensor(imm, pf.u, h, Q)[:, :3] - closed).max() for h in (1e-2, 5e-3)]
    assert errs[1] < 1e-2
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_calc2_needs_the_frame_rotation_term(sphere_pts):
    """Y - X x eta alone is not the derivative; the FD estimator sees the gap."""
    imm = sphere()
    pf = point_frame(imm, sphere_pts[1], q=Q)
    P = H.induced_cross(pf.frame, Q)
    ft = H.frame_tensors(pf, Q)
    D = H.nabla_p_fd_tensor(imm, pf.u, 1e-4, Q)[:, :3, 3:7]
    assert np.abs(D - np.asarray(H.calc2(ft, P), dtype=float)).max() < 1e-5
    assert np.abs(D - np.asarray(H.final2_terms(ft, P), dtype=float)).max() > 0.5


def test_gauss_consistency_torus():
    rep = H.gauss_consistency(torus_hyperplane(), np.full(7, 0.3), 1e-4, Q)
    assert rep.xi3 <= 1e-10 and rep.J <= 1e-10


def test_gauss_consistency_sphere_order_and_fault(sphere_pts):
    imm = sphere()
    u = sphere_pts[2]
    a = H.gauss_consistency(imm, u, 1e-2, Q)
    b = H.gauss_consistency(imm, u, 5e-3, Q)
    for r1, r2 in ((a.xi3, b.xi3), (a.J, b.J)):
        assert np.log2(r1 / r2) >= 1.8
    bad = H.gauss_consistency(imm, u, 1e-3, Q, fault="zero_b")
    assert bad.xi3 > 1e-2 and bad.J > 1e-2


def test_check_point_skips_on_frame_flip(monkeypatch):
    def flip(*args, **kwargs):
        raise FrameSmoothnessError("reference index changes")
    monkeypatch.setattr(H, "stencil_frames", flip)
    res = H.check_point(sphere(), sample_points(sphere(), 1, seed=0)[0])
    assert res.status == "skipped"
    assert "frame-smoothness" in res.reason


def test_check_point_exact_torus():
    res = H.check_point(torus_hyperplane(), [Fraction(1, 5)] * 7, exact=True)
    assert res.status == "ok"
    r = res.residuals
    assert r.r_final1 == 0 and r.r_final2 == 0 and r.r_nablaP_closed == 0
    assert r.r_nablaP_fd <= 1e-10

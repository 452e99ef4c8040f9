"""Parametrized oriented hypersurfaces M^7 in R^8 (or a flat torus T^8).

For a chart point ``u`` the module computes the jets of the immersion, the unit
normal, the induced metric ``g_ab``, the scalar second fundamental form
``h_ab = <d_a F_b, n>``, the derivative of the normal, the fields
``xi_i = J_i n`` and an orthonormal frame adapted to the quaternionic structure.

Sign convention: ``<d_a n, F_b> = -h_ab``.  The array ``PointFrame.shape`` is the
matrix ``S`` with ``d_a n = sum_b S[a, b] F_b``, hence ``S = -h g^{-1}``; for the
outward normal on the unit sphere ``h = -g`` and ``S = I``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigError, FrameError, FrameSmoothnessError, ImmersionError, StepTooLargeError
from .hyperkahler import QuaternionicStructure, standard_structures
from .linalg_core import (
    as_mode,
    det,
    eye,
    inv,
    is_exact,
    max_abs,
    scalar_sqrt,
    zeros,
)

SIGN_CONVENTION = "h_ab = <d_a F_b, n>; <d_a n, F_b> = -h_ab; d_a n = S F with S = -h g^-1"
DEFAULT_STEP = 1e-4
REFERENCE_THRESHOLD = 1e-6

Jet1 = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Immersion:
    """A single chart ``u in box -> f(u) in R^8``.

    ``df`` returns the 8x7 Jacobian (columns ``F_a``), ``d2f`` the 7x7x8 array
    of second derivatives.  Without them, or with ``jets="fd"``, derivatives are
    taken by central differences.
    """

    name: str
    params: dict
    lower: tuple
    upper: tuple
    periodic: tuple[bool, ...]
    f: Jet1
    df: Jet1 | None = None
    d2f: Jet1 | None = None
    exact_capable: bool = False
    jets: str = "analytic"

    def __post_init__(self):
        if len(self.lower) != 7 or len(self.upper) != 7 or len(self.periodic) != 7:
            raise ConfigError("chart box must be 7-dimensional")
        if self.jets not in ("analytic", "fd"):
            raise ConfigError(f"unknown jet mode {self.jets!r}")

    @property
    def analytic(self) -> bool:
        return self.jets == "analytic" and self.df is not None and self.d2f is not None

    def with_jets(self, jets: str) -> "Immersion":
        return dataclasses.replace(self, jets=jets)

    def wrap(self, u) -> np.ndarray:
        """Reduce periodic coordinates into the chart box."""
        u = np.array(u, dtype=object if is_exact(np.asarray(u)) else float)
        for a in range(7):
            if self.periodic[a]:
                lo = self.lower[a]
                period = self.upper[a] - lo
                u[a] = lo + (u[a] - lo) % period
        return u

    def contains(self, u) -> bool:
        return all(self.periodic[a] or self.lower[a] <= u[a] <= self.upper[a] for a in range(7))


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------

def torus_hyperplane(offset=0, scale=1) -> Immersion:
    """T^7 = {x8 = offset} inside R^8 / (scale Z)^8.  Chart period 1."""
    exact = isinstance(offset, (int, Fraction)) and isinstance(scale, (int, Fraction))
    c = Fraction(offset) if exact else float(offset)
    L = Fraction(scale) if exact else float(scale)
    if L == 0:
        raise ConfigError("torus scale must be nonzero")

    def f(u):
        u = np.asarray(u)
        x = zeros(8, is_exact(u))
        x[:7] = L * u
        x[7] += c
        return x

    def df(u):
        ex = is_exact(np.asarray(u))
        J = zeros((8, 7), ex)
        J[:7, :] = eye(7, ex) * L
        return J

    def d2f(u):
        return zeros((7, 7, 8), is_exact(np.asarray(u)))

    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    return Immersion("torus-hyperplane", {"offset": offset, "scale": scale},
                     (zero,) * 7, (one,) * 7, (True,) * 7, f, df, d2f, exact_capable=exact)


# per coordinate k and angle a: 0 -> factor 1, 1 -> sin, 2 -> cos
_SPHERE_KIND = np.array([[1] * k + [2] + [0] * (6 - k) for k in range(7)] + [[1] * 7])
# reversing the last angle makes the positively oriented normal point outward
_SPHERE_SIGN = np.array([1.0] * 7 + [-1.0])


def _sphere_factors(phi: np.ndarray, order: int) -> np.ndarray:
    """d^order/dphi^order of each per-angle factor, shape (8, 7)."""
    s, c = np.sin(phi), np.cos(phi)
    sin_d = (s, c, -s)[order]
    cos_d = (c, -s, -c)[order]
    one_d = np.ones(7) if order == 0 else np.zeros(7)
    return np.where(_SPHERE_KIND == 1, sin_d, np.where(_SPHERE_KIND == 2, cos_d, one_d))


def sphere(radius=1.0, margin: float = 0.25) -> Immersion:
    """Round S^7 of the given radius in hyperspherical coordinates.

    Angles 1..6 range over ``[margin, pi - margin]``; angle 7 is periodic.
    """
    R = float(radius)
    if R <= 0:
        raise ConfigError("sphere radius must be positive")

    def f(u):
        vals = _sphere_factors(np.asarray(u, dtype=float), 0)
        return R * _SPHERE_SIGN * vals.prod(axis=1)

    def df(u):
        phi = np.asarray(u, dtype=float)
        v0, v1 = _sphere_factors(phi, 0), _sphere_factors(phi, 1)
        J = np.empty((8, 7))
        for a in range(7):
            m = v0.copy()
            m[:, a] = v1[:, a]
            J[:, a] = m.prod(axis=1)
        return R * _SPHERE_SIGN[:, None] * J

    def d2f(u):
        phi = np.asarray(u, dtype=float)
        v = [_sphere_factors(phi, k) for k in range(3)]
        H = np.empty((7, 7, 8))
        for a in range(7):
            for b in range(a, 7):
                m = v[0].copy()
                if a == b:
                    m[:, a] = v[2][:, a]
                else:
                    m[:, a] = v[1][:, a]
                    m[:, b] = v[1][:, b]
                H[a, b] = H[b, a] = m.prod(axis=1)
        return R * H * _SPHERE_SIGN

    lo = (margin,) * 6 + (0.0,)
    hi = (math.pi - margin,) * 6 + (2 * math.pi,)
    return Immersion("sphere", {"radius": radius}, lo, hi, (False,) * 6 + (True,), f, df, d2f)


def graph(phi: Callable, grad: Callable | None = None, hess: Callable | None = None, *,
          lower=(-1.0,) * 7, upper=(1.0,) * 7, periodic=(False,) * 7,
          name: str = "graph", params: dict | None = None) -> Immersion:
    """The graph ``u -> (u, phi(u))`` of a height function."""

    def f(u):
        u = np.asarray(u, dtype=float)
        return np.concatenate([u, [phi(u)]])

    df = d2f = None
    if grad is not None:
        def df(u):
            u = np.asarray(u, dtype=float)
            J = np.zeros((8, 7))
            J[:7] = np.eye(7)
            J[7] = grad(u)
            return J
    if hess is not None:
        def d2f(u):
            H = np.zeros((7, 7, 8))
            H[:, :, 7] = hess(np.asarray(u, dtype=float))
            return H
    return Immersion(name, params or {}, tuple(lower), tuple(upper), tuple(periodic), f, df, d2f)


def graph_quadratic(matrix=None) -> Immersion:
    """Graph of ``u^T A u`` over ``[-1, 1]^7``."""
    A = 0.5 * np.eye(7) if matrix is None else np.asarray(matrix, dtype=float)
    if A.shape != (7, 7) or not np.allclose(A, A.T):
        raise ConfigError("graph-quadratic needs a symmetric 7x7 matrix")
    return graph(lambda u: float(u @ A @ u), lambda u: 2 * A @ u, lambda u: 2 * A,
                 name="graph-quadratic", params={"matrix": A.tolist()})


DEFAULT_FOURIER_TERMS = (((1, 0, 0, 0, 0, 0, 0), 0.3), ((0, 1, 1, 0, 0, 0, 0), 0.2), ((0, 0, 0, 1, 0, 2, -1), 0.1))


def graph_fourier(terms=DEFAULT_FOURIER_TERMS) -> Immersion:
    """Graph of ``sum amp * cos(k . u)`` over the periodic box ``[0, 2 pi)^7``."""
    ks = np.array([t[0] for t in terms], dtype=float).reshape(-1, 7)
    amps = np.array([t[1] for t in terms], dtype=float)
    if len(ks) != len(amps):
        raise ConfigError("graph-fourier terms are (multi-index, amplitude) pairs")

    def phi(u):
        return float(amps @ np.cos(ks @ u))

    def grad(u):
        return -(amps * np.sin(ks @ u)) @ ks

    def hess(u):
        w = -amps * np.cos(ks @ u)
        return (ks.T * w) @ ks

    return graph(phi, grad, hess, lower=(0.0,) * 7, upper=(2 * math.pi,) * 7, periodic=(True,) * 7,
                 name="graph-fourier",
                 params={"terms": [[list(map(int, k)), float(a)] for k, a in terms]})


CATALOG: dict[str, Callable[..., Immersion]] = {
    "torus-hyperplane": torus_hyperplane,
    "sphere": sphere,
    "graph-quadratic": graph_quadratic,
    "graph-fourier": graph_fourier,
}


def make_immersion(name: str, params: dict | None = None, jets: str = "analytic") -> Immersion:
    if name not in CATALOG:
        raise ConfigError(f"unknown immersion {name!r}; known: {', '.join(CATALOG)}")
    try:
        imm = CATALOG[name](**(params or {}))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name}: {exc}") from exc
    return imm.with_jets(jets)


def sample_points(imm: Immersion, count: int, seed: int, sobol: bool = False) -> np.ndarray:
    """Seeded uniform (or scrambled Sobol) points in the chart box, shape (count, 7)."""
    lo = np.array([float(x) for x in imm.lower])
    hi = np.array([float(x) for x in imm.upper])
    if sobol:
        from scipy.stats import qmc

        unit = qmc.Sobol(d=7, scramble=True, seed=seed).random(count)
    else:
        unit = np.random.default_rng(seed).random((count, 7))
    return lo + unit * (hi - lo)


# --------------------------------------------------------------------------
# jets and point frames
# --------------------------------------------------------------------------

def jets(imm: Immersion, u, h: float = DEFAULT_STEP) -> tuple[np.ndarray, np.ndarray]:
    """(F, d2f): 8x7 Jacobian and 7x7x8 second derivatives."""
    if imm.analytic:
        return imm.df(u), imm.d2f(u)
    if is_exact(np.asarray(u)):
        raise ImmersionError("finite-difference jets are float-only")
    u = np.asarray(u, dtype=float)
    E = np.eye(7) * h
    F = np.empty((8, 7))
    for a in range(7):
        F[:, a] = (imm.f(u + E[a]) - imm.f(u - E[a])) / (2 * h)
    D2 = np.empty((7, 7, 8))
    for a in range(7):
        for b in range(a, 7):
            val = (imm.f(u + E[a] + E[b]) - imm.f(u + E[a] - E[b])
                   - imm.f(u - E[a] + E[b]) + imm.f(u - E[a] - E[b])) / (4 * h * h)
            D2[a, b] = D2[b, a] = val
    return F, D2


def unit_normal(F: np.ndarray) -> np.ndarray:
    """Unit n with det[F_1..F_7, n] > 0, via cofactors c_k = det[F | e_k]."""
    exact = is_exact(F)
    if not exact:
        sv = np.linalg.svd(F, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise ImmersionError(f"Jacobian rank below 7 (singular values {sv[-1]:.3g} / {sv[0]:.3g})")
    c = zeros(8, exact)
    for k in range(8):
        minor = np.delete(F, k, axis=0)
        c[k] = (-1) ** (k + 7) * det(minor)
    n2 = c @ c
    if n2 == 0:
        raise ImmersionError("Jacobian rank below 7")
    return c / scalar_sqrt(n2)


@dataclass
class PointFrame:
    u: np.ndarray
    F: np.ndarray          # (8, 7) tangent vectors d_a f as columns
    d2f: np.ndarray        # (7, 7, 8)
    n: np.ndarray          # (8,)
    g: np.ndarray          # (7, 7) induced metric
    ginv: np.ndarray
    h: np.ndarray          # (7, 7) scalar second fundamental form
    shape: np.ndarray      # (7, 7) S, d_a n = sum_b S[a, b] F_b
    dn: np.ndarray         # (7, 8) d_a n in ambient coordinates
    xi: np.ndarray         # (3, 8) J_i n
    frame: np.ndarray      # (8, 7) adapted orthonormal frame as columns
    frame_chart: np.ndarray  # (7, 7) chart components: frame = F @ frame_chart
    ref_index: int
    exact: bool = False
    meta: dict = field(default_factory=dict)

    def frame_second_form(self) -> np.ndarray:
        """h in the adapted frame: H[m, k] = h(xi_m, xi_k)."""
        V = self.frame_chart
        return V.T @ self.h @ V

    def tangential(self, w: np.ndarray) -> np.ndarray:
        """Frame coordinates of the tangential part of an ambient vector."""
        return self.frame.T @ w


def xi_fields(pf: PointFrame, q: QuaternionicStructure, tol: float = 1e-12) -> np.ndarray:
    """xi_i = J_i n, shape (3, 8); unit and mutually orthogonal by the quaternion relations."""
    exact = pf.exact and q.exact
    J = q.matrices(exact)
    xi = np.array([Ji @ pf.n for Ji in J], dtype=object if exact else float)
    G = np.vstack([xi, pf.n[None, :]])
    err = max_abs(G @ G.T - eye(4, exact))
    if (err != 0) if exact else err > tol:
        raise FrameError(f"J_i n fail to be orthonormal (residual {float(err):.3g})")
    return xi


def adapted_frame(pf: PointFrame, q: QuaternionicStructure, ref: Sequence[np.ndarray] | None = None,
                  threshold: float = REFERENCE_THRESHOLD, xi: np.ndarray | None = None
                  ) -> tuple[np.ndarray, int]:
    """Frame (xi_1, xi_2, xi_3, xi_4, J1 xi_4, J2 xi_4, J3 xi_4) as 8x7 columns.

    xi_4 is the normalized projection onto span(n, xi_1, xi_2, xi_3)^perp of
    the first reference vector whose projection has norm >= ``threshold``.
    Returns the frame and the selected reference index.
    """
    exact = pf.exact and q.exact
    J = q.matrices(exact)
    xi = xi_fields(pf, q) if xi is None else xi
    refs = list(eye(8, exact)) if ref is None else [as_mode(r, exact) for r in ref]
    N = np.vstack([pf.n[None, :], xi])  # (4, 8), orthonormal rows
    for idx, w in enumerate(refs):
        p = w - N.T @ (N @ w)
        n2 = p @ p
        if (n2 == 0) if exact else math.sqrt(n2) < threshold:
            continue
        xi4 = p / scalar_sqrt(n2)
        cols = [xi[0], xi[1], xi[2], xi4] + [Ji @ xi4 for Ji in J]
        frame = np.column_stack(cols)
        return frame, idx
    raise FrameError("every reference vector is degenerate for the adapted frame")


def point_frame(imm: Immersion, u, h: float = DEFAULT_STEP, q: QuaternionicStructure | None = None,
                ref: Sequence[np.ndarray] | None = None, exact: bool | None = None,
                step_tol: float = 1e-5, wrap: bool = True) -> PointFrame:
    """All first- and second-order data of the hypersurface at chart point ``u``.

    ``exact=True`` (only for exact-capable immersions at rational points) keeps
    every quantity as Fractions.  With finite-difference jets the Gauss
    decomposition residual is checked and :class:`StepTooLargeError` raised if
    it exceeds ``step_tol * (1 + |d2f|)``.
    """
    q = standard_structures() if q is None else q
    if exact is None:
        exact = imm.exact_capable and is_exact(np.asarray(u))
    if exact and not imm.exact_capable:
        raise ImmersionError(f"{imm.name} has no exact evaluation")
    u = as_mode(np.asarray(u, dtype=object), exact) if exact else np.asarray(u, dtype=float)
    if wrap:
        u = imm.wrap(u)
    F, D2 = jets(imm, u, h)
    F, D2 = as_mode(F, exact), as_mode(D2, exact)
    n = unit_normal(F)
    g = F.T @ F
    ginv = inv(g)
    hh = D2 @ n
    S = -(hh @ ginv)
    dn = S @ F.T
    pf = PointFrame(u, F, D2, n, g, ginv, hh, S, dn, None, None, None, -1, exact)
    pf.xi = xi_fields(pf, q)
    frame, idx = adapted_frame(pf, q, ref, xi=pf.xi)
    pf.frame, pf.ref_index = frame, idx
    pf.frame_chart = ginv @ (F.T @ frame)
    if not imm.analytic and step_tol is not None:
        r = gauss_decomposition_residual(imm, u, h, pf=pf)
        pf.meta["gauss_decomposition_residual"] = r
        bound = step_tol * (1.0 + float(max_abs(D2)))
        if r > bound:
            raise StepTooLargeError(f"Gauss decomposition residual {r:.3g} exceeds {bound:.3g} at step {h}", r)
    return pf


def frame_gram_residual(pf: PointFrame) -> object:
    E = pf.frame
    return max_abs(E.T @ E - eye(7, pf.exact))


def j_adapted_residual(pf: PointFrame, q: QuaternionicStructure) -> object:
    """max |xi_{4+i} - J_i xi_4| and |xi_i - J_i n| over i."""
    J = q.matrices(pf.exact and q.exact)
    r1 = max(max_abs(pf.frame[:, 4 + i] - J[i] @ pf.frame[:, 3]) for i in range(3))
    r2 = max(max_abs(pf.frame[:, i] - J[i] @ pf.n) for i in range(3))
    return max(r1, r2)


@dataclass(frozen=True)
class QRReport:
    residuals: tuple
    tol: float
    holds: bool


def qr_check(pf: PointFrame, q: QuaternionicStructure, tol: float = 1e-12) -> QRReport:
    """|<J_i n, n>| for i = 1, 2, 3: the part of J_i n that leaves the tangent space."""
    exact = pf.exact and q.exact
    J = q.matrices(exact)
    res = tuple(abs((Ji @ pf.n) @ pf.n) for Ji in J)
    holds = all(float(r) <= tol for r in res)
    return QRReport(res, tol, holds)


# --------------------------------------------------------------------------
# connection
# --------------------------------------------------------------------------

@dataclass
class ChristoffelData:
    u: np.ndarray
    gamma: np.ndarray   # gamma[c, a, b] = Gamma^c_ab
    g: np.ndarray
    dg: np.ndarray      # dg[a, b, c] = d_a g_bc

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.gamma - self.gamma.transpose(0, 2, 1))))

    def compatibility_residual(self) -> float:
        """max |d_a g_bc - Gamma^d_ab g_dc - Gamma^d_ac g_bd|."""
        low = np.einsum("dab,dc->abc", self.gamma, self.g)
        return float(np.max(np.abs(self.dg - low - low.transpose(0, 2, 1))))


def metric_at(imm: Immersion, u, h: float = DEFAULT_STEP) -> np.ndarray:
    F, _ = jets(imm, u, h)
    F = np.asarray(F, dtype=float)
    return F.T @ F


def christoffel(imm: Immersion, u, h: float = DEFAULT_STEP, analytic: bool | None = None) -> ChristoffelData:
    """Gamma^c_ab = 1/2 g^cd (d_a g_bd + d_b g_ad - d_d g_ab).

    ``analytic=True`` differentiates g through the second-derivative jets;
    otherwise g is central-differenced with step ``h``.
    """
    u = np.asarray(u, dtype=float)
    if analytic is None:
        analytic = imm.analytic
    F, D2 = jets(imm, u, h)
    F, D2 = np.asarray(F, dtype=float), np.asarray(D2, dtype=float)
    g = F.T @ F
    if analytic:
        if not imm.analytic:
            raise ImmersionError(f"{imm.name} has no analytic jets")
        t = np.einsum("abk,kc->abc", D2, F)
        dg = t + t.transpose(0, 2, 1)
    else:
        E = np.eye(7) * h
        dg = np.empty((7, 7, 7))
        for a in range(7):
            dg[a] = (metric_at(imm, u + E[a], h) - metric_at(imm, u - E[a], h)) / (2 * h)
    gamma = _kernels.christoffel(np.linalg.inv(g), dg)
    return ChristoffelData(u, gamma, g, dg)


def gauss_decomposition_residual(imm: Immersion, u, h: float = DEFAULT_STEP,
                                 pf: PointFrame | None = None) -> float:
    """max_ab |d_a F_b - Gamma^c_ab F_c - h_ab n| with g differentiated at step h."""
    if pf is None:
        pf = point_frame(imm, u, h, step_tol=None)
    F = np.asarray(pf.F, dtype=float)
    D2 = np.asarray(pf.d2f, dtype=float)
    n = np.asarray(pf.n, dtype=float)
    hh = np.asarray(pf.h, dtype=float)
    ch = christoffel(imm, np.asarray(pf.u, dtype=float), h, analytic=False)
    recon = np.einsum("cab,kc->abk", ch.gamma, F) + hh[:, :, None] * n
    return float(np.max(np.abs(D2 - recon)))


def stencil_frames(imm: Immersion, u, h: float, q: QuaternionicStructure, base: PointFrame
                   ) -> list[tuple[PointFrame, PointFrame]]:
    """Frames at u +- h e_a (unwrapped), checked to select the base reference index."""
    u = np.asarray(u, dtype=float)
    E = np.eye(7) * h
    out = []
    for a in range(7):
        pair = []
        for s in (1.0, -1.0):
            pf = point_frame(imm, u + s * E[a], h, q, exact=False, step_tol=None, wrap=False)
            if pf.ref_index != base.ref_index:
                raise FrameSmoothnessError(
                    f"reference index changes from {base.ref_index} to {pf.ref_index} across the stencil")
            pair.append(pf)
        out.append(tuple(pair))
    return out


__all__ = [
    "SIGN_CONVENTION",
    "DEFAULT_STEP",
    "Immersion",
    "PointFrame",
    "ChristoffelData",
    "QRReport",
    "CATALOG",
    "torus_hyperplane",
    "sphere",
    "graph",
    "graph_quadratic",
    "graph_fourier",
    "make_immersion",
    "sample_points",
    "jets",
    "unit_normal",
    "point_frame",
    "xi_fields",
    "adapted_frame",
    "qr_check",
    "christoffel",
    "gauss_decomposition_residual",
    "stencil_frames",
    "frame_gram_residual",
    "j_adapted_residual",
]

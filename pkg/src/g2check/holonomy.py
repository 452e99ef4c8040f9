"""Cross product on a hypersurface-type QR-submanifold and its covariant derivative.

Frame indices 0..6 stand for (xi_1, xi_2, xi_3, xi_4, J1 xi_4, J2 xi_4, J3 xi_4);
indices 0..2 are the fields ``xi_i = J_i n`` and 3..6 span the quaternionic
part D of the tangent space.

The product is fixed on the frame by

* ``P(xi_i, xi_j) = -xi_k`` for cyclic (i, j, k),
* ``P(xi_i, eta) = J_i eta`` for eta in D,
* ``P(eta, J_i eta) = xi_i`` for unit eta in D,

and extended bilinearly.  The minus sign in the first rule is forced: with
``J1 J2 = J3`` the product with ``+xi_k`` satisfies the double-cross identity on
basis pairs only, not on their linear combinations.

With ``X_i(xi)`` the tangential part of ``J_i(dn(xi))`` and
``Y_i(xi, eta) = h(xi, eta) xi_i`` the tangential part of
``J_i b(xi, eta) - b(xi, J_i eta)``, the covariant derivative in the slots that
contain some ``xi_i`` is

* ``(nabla_xi P)(xi_i, xi_j) = -X_k - X_i x xi_j - xi_i x X_j``
* ``(nabla_xi P)(xi_i, eta) = Y_i(xi, eta) - X_i x eta + 2 sum_j <eta, X_j> P(xi_i, xi_j)``.

The residuals ``r_final1`` and ``r_final2`` measure the first expression and
``Y_i - X_i x eta``; when both vanish every X_i vanishes, so the last term
drops out and ``nabla P = 0``.  :func:`nabla_p_fd` recomputes the same slots
intrinsically (Christoffel symbols and finite differences of the frame) as an
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import FrameError, FrameSmoothnessError, ImmersionError, NotRationalError, RankDeficiencyError
from .g2 import CrossProduct, check_cross_axioms
from .hyperkahler import QuaternionicStructure, standard_structures
from .hypersurface import DEFAULT_STEP, Immersion, PointFrame, point_frame, stencil_frames
from .linalg_core import Metric, as_mode, eye, is_exact, matmul, max_abs, sqrt_exact, zeros

CROSS_CONVENTION = (
    "P(xi_i, xi_j) = -xi_k for cyclic (ijk); P(xi_i, eta) = J_i eta and "
    "P(eta, J_i eta) = xi_i for eta in span(xi_4..xi_7)"
)
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
QUAT = range(3, 7)

PARALLEL = "parallel-within-tol"
NOT_PARALLEL = "not-parallel"
INCONCLUSIVE = "inconclusive"

DEFAULT_TOL_ANALYTIC = 1e-8
DEFAULT_TOL_FD = 1e-6


def default_tol(imm: Immersion) -> float:
    return DEFAULT_TOL_ANALYTIC if imm.analytic else DEFAULT_TOL_FD


# --------------------------------------------------------------------------
# induced cross product
# --------------------------------------------------------------------------

@dataclass
class InducedCross:
    table: np.ndarray   # table[a, b, c]: c-th frame component of P(xi_a, xi_b)
    frame: np.ndarray   # (8, 7) ambient frame the table refers to

    @property
    def exact(self) -> bool:
        return is_exact(self.table)

    def __call__(self, u, v) -> np.ndarray:
        u, v = np.asarray(u), np.asarray(v)
        if self.exact or is_exact(u) or is_exact(v):
            return v @ (u @ self.table.reshape(7, 49)).reshape(7, 7)
        return _kernels.cross_apply(self.table, u, v)

    def as_cross_product(self) -> CrossProduct:
        return CrossProduct(self.table, Metric.euclidean(7, self.exact), basis=self.frame)


def induced_cross(frame: np.ndarray, q: QuaternionicStructure, tol: float = 1e-10,
                  check: bool = True) -> InducedCross:
    """Fill the structure constants of P on an adapted frame.

    Raises :class:`FrameError` when the frame is not J-adapted, when two rules
    assign different values to one slot, or (``check=True``) when the completed
    table violates the cross-product identities by more than ``tol``.
    """
    exact = is_exact(frame) and q.exact
    J = q.matrices(exact)
    frame = as_mode(frame, exact)
    T = zeros((7, 7, 7), exact)
    assigned = np.zeros((7, 7), dtype=bool)
    ident = eye(7, exact)

    def differs(a, b) -> bool:
        d = max_abs(a - b)
        return d != 0 if exact else d > tol

    def assign(a: int, b: int, vec):
        for x, y, v in ((a, b, vec), (b, a, -vec)):
            if assigned[x, y]:
                if differs(T[x, y], v):
                    raise FrameError(f"slot ({x}, {y}) receives two different values")
            else:
                T[x, y] = v
                assigned[x, y] = True

    for i, j, k in CYCLIC:
        assign(i, j, -ident[k])
    images = {}
    for i in range(3):
        for a in QUAT:
            w = J[i] @ frame[:, a]
            c = frame.T @ w
            if differs(frame @ c, w) or differs(c[:3], zeros(3, exact)):
                raise FrameError(f"J{i + 1} maps frame vector {a} outside the quaternionic span")
            images[i, a] = c
            assign(i, a, c)
    for a in QUAT:
        for i in range(3):
            c = images[i, a]
            for b in QUAT:
                cb = c[b]
                if (cb == 0) if exact else abs(cb) <= 0.5:
                    continue
                if differs(abs(cb), Fraction(1) if exact else 1.0):
                    raise FrameError(f"J{i + 1} xi_{a + 1} is not a unit frame vector")
                # eta' = J_i eta = cb xi_b, so P(eta, xi_b) = xi_i / cb = cb xi_i
                assign(a, b, cb * ident[i])
    missing = [(a, b) for a in range(7) for b in range(7) if a != b and not assigned[a, b]]
    if missing:
        raise FrameError(f"table slots left undetermined: {missing[:3]}")
    P = InducedCross(T, frame)
    if check:
        key = tuple(T.reshape(-1)) if exact else None
        ok = _EXACT_TABLE_OK.get(key) if exact else None
        if ok is None:
            rep = check_cross_axioms(P.as_cross_product(), n_random=20)
            ok = rep.passed(0.0 if exact else tol)
            if exact:
                _EXACT_TABLE_OK[key] = ok
            if not ok:
                raise FrameError(f"completed table violates the cross-product identities: {rep.residuals}")
        elif not ok:
            raise FrameError("completed table violates the cross-product identities")
    return P


# exact tables repeat from point to point on a torus; their verdict is cached
_EXACT_TABLE_OK: dict[tuple, bool] = {}


def _times_table(X: np.ndarray, T: np.ndarray, slot: int) -> np.ndarray:
    """Contract the last axis of X with axis ``slot`` (0 or 1) of the table.

    ``slot=0`` gives ``out[..., b, c] = P(X, xi_b)^c``, ``slot=1`` gives
    ``out[..., a, c] = P(xi_a, X)^c``.  Exact tables are handled sparsely.
    """
    if not is_exact(T):
        Tf = T if slot == 0 else T.transpose(1, 0, 2)
        return np.tensordot(np.asarray(X, dtype=float), np.asarray(Tf, dtype=float), axes=([-1], [0]))
    rows: dict[int, list] = {}
    for a, b, c in zip(*np.nonzero(T != 0)):
        if slot == 0:
            rows.setdefault(int(a), []).append((b, c, T[a, b, c]))
        else:
            rows.setdefault(int(b), []).append((a, c, T[a, b, c]))
    out = zeros(X.shape[:-1] + (7, 7), True)
    for idx in zip(*np.nonzero(X != 0)):
        x = X[idx]
        head = idx[:-1]
        for b, c, t in rows.get(int(idx[-1]), ()):
            out[head + (b, c)] += t * x
    return out


# --------------------------------------------------------------------------
# X and Y tensors
# --------------------------------------------------------------------------

def _direction(pf: PointFrame, xi) -> np.ndarray:
    """Chart components of a frame index or of a frame-coordinate vector."""
    if isinstance(xi, (int, np.integer)):
        return pf.frame_chart[:, int(xi)]
    return pf.frame_chart @ as_mode(np.asarray(xi, dtype=object), pf.exact)


def _J(q: QuaternionicStructure, pf: PointFrame):
    return q.matrices(pf.exact and q.exact)


def x_tensor(pf: PointFrame, q: QuaternionicStructure, i: int, xi) -> np.ndarray:
    """Ambient X_i(xi): tangential part of J_i applied to the derivative of n along xi."""
    w = _J(q, pf)[i] @ (_direction(pf, xi) @ pf.dn)
    return w - (w @ pf.n) * pf.n


def x_normal_part(pf: PointFrame, q: QuaternionicStructure, i: int, xi):
    """<J_i dn(xi), n>; equals h(xi_i, xi) by the Weingarten relation."""
    w = _J(q, pf)[i] @ (_direction(pf, xi) @ pf.dn)
    return w @ pf.n


def y_tensor(pf: PointFrame, q: QuaternionicStructure, i: int, xi, eta) -> np.ndarray:
    """Ambient J_i b(xi, eta) - b(xi, J_i eta) with b = h n.

    J_i eta enters b through its tangential part (the whole of it when eta lies
    in the quaternionic span).
    """
    J = _J(q, pf)[i]
    a = _direction(pf, xi)
    e = _direction(pf, eta)
    h_ae = a @ pf.h @ e
    je = J @ (pf.F @ e)
    je_tan = je - (je @ pf.n) * pf.n
    je_chart = pf.ginv @ (pf.F.T @ je_tan)
    return h_ae * pf.xi[i] - (a @ pf.h @ je_chart) * pf.n


@dataclass
class FrameTensors:
    """X, Y and helpers in frame coordinates at one point."""

    X: np.ndarray         # (3, 7, 7)  X[i, m] = X_i(xi_m)
    X_normal: np.ndarray  # (3, 7)     <J_i dn(xi_m), n>
    Y: np.ndarray         # (3, 7, 7, 7)  tangential Y_i(xi_m, xi_b)
    Y_normal: np.ndarray  # (3, 7, 7)  normal coefficient of Y_i(xi_m, xi_b)
    H: np.ndarray         # (7, 7)     h in the frame
    K: np.ndarray         # (3, 7, 7)  K[i][:, b] = tangential part of J_i xi_b


def frame_tensors(pf: PointFrame, q: QuaternionicStructure) -> FrameTensors:
    exact = pf.exact and q.exact
    J = q.matrices(exact)
    E = pf.frame
    dn_frame = matmul(pf.frame_chart.T, pf.dn)   # (7, 8): dn along xi_m
    H = matmul(matmul(pf.frame_chart.T, pf.h), pf.frame_chart)
    X = zeros((3, 7, 7), exact)
    Xn = zeros((3, 7), exact)
    K = zeros((3, 7, 7), exact)
    Y = zeros((3, 7, 7, 7), exact)
    Yn = zeros((3, 7, 7), exact)
    for i in range(3):
        W = matmul(J[i], dn_frame.T)                # (8, 7)
        X[i] = matmul(E.T, W).T
        Xn[i] = matmul(pf.n, W)
        K[i] = matmul(E.T, matmul(J[i], E))
        Yn[i] = -matmul(H, K[i])
        Y[i, :, :, i] = H
    return FrameTensors(X, Xn, Y, Yn, H, K)


def _norms(v: np.ndarray):
    """Euclidean norms along the last axis; exact zeros stay exact."""
    if not is_exact(v):
        return np.linalg.norm(v, axis=-1)
    sq = (v * v).sum(axis=-1)
    out = np.empty(sq.shape, dtype=object)
    for idx, s in np.ndenumerate(sq):
        try:
            out[idx] = sqrt_exact(s)
        except NotRationalError:
            out[idx] = math.sqrt(s)
    return out


def _max(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return max(a.reshape(-1)) if is_exact(a) else float(np.max(a))


def calc1(ft: FrameTensors, P: InducedCross) -> np.ndarray:
    """(nabla_{xi_m} P)(xi_i, xi_j) for cyclic (i, j): shape (7, 3, 7), rows follow CYCLIC."""
    left = _times_table(ft.X, P.table, 0)    # left[i, m, b] = P(X_i(xi_m), xi_b)
    right = _times_table(ft.X, P.table, 1)   # right[j, m, a] = P(xi_a, X_j(xi_m))
    out = zeros((7, 3, 7), P.exact)
    for r, (i, j, k) in enumerate(CYCLIC):
        out[:, r] = -ft.X[k] - left[i, :, j] - right[j, :, i]
    return out


def final2_terms(ft: FrameTensors, P: InducedCross) -> np.ndarray:
    """Y_i(xi_m, eta) - X_i(xi_m) x eta for eta in the quaternionic span: shape (7, 3, 4, 7)."""
    left = _times_table(ft.X, P.table, 0)    # (3, 7, 7, 7)
    diff = ft.Y[:, :, 3:7] - left[:, :, 3:7]
    return diff.transpose(1, 0, 2, 3).copy()


def calc2(ft: FrameTensors, P: InducedCross) -> np.ndarray:
    """(nabla_{xi_m} P)(xi_i, eta) for eta in the quaternionic span: shape (7, 3, 4, 7).

    On top of :func:`final2_terms` this carries ``2 sum_j <eta, X_j> P(xi_i, xi_j)``:
    the covariant derivative of eta has components along the xi_j, and on those
    P(xi_i, .) is minus the tangential part of J_i.  The extra term vanishes
    whenever every X_i does, in particular whenever both final residuals do.
    """
    T = P.table
    out = final2_terms(ft, P)
    two = Fraction(2) if P.exact else 2.0
    for i in range(3):
        for j in range(3):
            if j == i:
                continue
            # X[j, m, a] = <X_j(xi_m), xi_a>
            coef = ft.X[j][:, 3:7]                     # (7, 4)
            out[:, i] += two * coef[:, :, None] * T[i, j][None, None, :]
    return out


def calc3(ft: FrameTensors, P: InducedCross) -> np.ndarray:
    """The third closed form coincides with :func:`calc2` term by term."""
    return calc2(ft, P)


def closed_nabla_p_slots(ft: FrameTensors, P: InducedCross) -> np.ndarray:
    """Closed-form (nabla_{xi_m} P)(xi_i, xi_b) for i in 0..2, all b: shape (7, 3, 7, 7)."""
    out = zeros((7, 3, 7, 7), P.exact)
    c1 = calc1(ft, P)
    c2 = calc2(ft, P)
    for r, (i, j, k) in enumerate(CYCLIC):
        out[:, i, j] = c1[:, r]
        out[:, j, i] = -c1[:, r]
    for i in range(3):
        for r, a in enumerate(QUAT):
            out[:, i, a] = c2[:, i, r]
    return out


# --------------------------------------------------------------------------
# residuals at a point
# --------------------------------------------------------------------------

@dataclass
class HolonomyResiduals:
    u: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    r_final1: object
    r_final2: object
    r_nablaP_closed: object
    r_nablaP_fd: float | None
    verdict: str
    tol: float
    noise_floor: float
    diagnostics: dict = field(default_factory=dict)


def noise_floor(imm: Immersion, h: float, H: np.ndarray | None = None) -> float:
    """Rough size of the numerical noise in the closed-form residuals."""
    scale = 1.0 + (float(max_abs(H)) if H is not None else 0.0)
    eps = np.finfo(float).eps
    if imm.analytic:
        return 64 * eps * scale
    return max(h * h, eps / (h * h)) * scale


def classify(r: float, tol: float, floor: float) -> str:
    if r <= tol:
        return PARALLEL
    if r <= 10 * floor:
        return INCONCLUSIVE
    return NOT_PARALLEL


def final_residuals(pf: PointFrame, q: QuaternionicStructure, tol: float,
                    P: InducedCross | None = None, floor: float = 0.0) -> HolonomyResiduals:
    """Residuals of the two sufficient conditions and the closed-form nabla P."""
    P = induced_cross(pf.frame, q) if P is None else P
    ft = frame_tensors(pf, q)
    c1 = calc1(ft, P)
    r1 = _max(_norms(c1))
    r2 = _max(_norms(final2_terms(ft, P)))
    closed = max(r1, _max(_norms(calc2(ft, P))))
    # diagnostics outside the hypotheses of the sufficient conditions
    y_normal = _max(np.abs(ft.Y_normal[:, :, 3:].astype(float)))
    x_gauss = _max(np.abs((ft.X_normal - ft.H[:3, :]).astype(float)))
    verdict = classify(float(max(r1, r2)), tol, floor)
    return HolonomyResiduals(
        u=pf.u, X=ft.X, Y=ft.Y, r_final1=r1, r_final2=r2, r_nablaP_closed=closed,
        r_nablaP_fd=None, verdict=verdict, tol=tol, noise_floor=floor,
        diagnostics={"y_normal_max": y_normal, "x_normal_minus_h": x_gauss},
    )


def nabla_p_closed(pf: PointFrame, q: QuaternionicStructure, P: InducedCross | None = None):
    """Max norm of the closed-form nabla P over the frame."""
    P = induced_cross(pf.frame, q) if P is None else P
    ft = frame_tensors(pf, q)
    return max(_max(_norms(calc1(ft, P))), _max(_norms(calc2(ft, P))))


# --------------------------------------------------------------------------
# intrinsic finite-difference route
# --------------------------------------------------------------------------

@dataclass
class StencilData:
    base: PointFrame
    gamma: np.ndarray   # Gamma^c_ab from central differences of g
    A: np.ndarray       # A[m, d, c] = <nabla_{xi_m} xi_c, xi_d>
    dV: np.ndarray      # dV[a] = d_a of the frame's chart components
    frames: list


def _float_frame(pf: PointFrame) -> PointFrame:
    if not pf.exact:
        return pf
    conv = {k: (np.asarray(v).astype(float) if isinstance(v, np.ndarray) else v)
            for k, v in pf.__dict__.items()}
    conv["exact"] = False
    return PointFrame(**conv)


def stencil_data(imm: Immersion, u, h: float, q: QuaternionicStructure,
                 base: PointFrame | None = None) -> StencilData:
    if base is None:
        base = point_frame(imm, np.asarray(u, dtype=float), h, q, exact=False, step_tol=None)
    base = _float_frame(base)
    frames = stencil_frames(imm, np.asarray(base.u, dtype=float), h, q, base)
    dV = np.empty((7, 7, 7))
    dg = np.empty((7, 7, 7))
    for a, (plus, minus) in enumerate(frames):
        dV[a] = (plus.frame_chart - minus.frame_chart) / (2 * h)
        dg[a] = (plus.g - minus.g) / (2 * h)
    gamma = _kernels.christoffel(np.linalg.inv(base.g), dg)
    A = _kernels.frame_connection(base.frame_chart, dV, gamma, base.g)
    return StencilData(base, gamma, A, dV, frames)


def nabla_p_fd_tensor(imm: Immersion, u, h: float = DEFAULT_STEP, q: QuaternionicStructure | None = None,
                      stencil: StencilData | None = None) -> np.ndarray:
    """Finite-difference (nabla_{xi_m} P)(xi_a, xi_b), shape (7, 7, 7, 7)."""
    q = standard_structures() if q is None else q
    sd = stencil_data(imm, u, h, q) if stencil is None else stencil
    P = induced_cross(sd.base.frame, q)
    return _kernels.nabla_p(np.asarray(P.table, dtype=float), sd.A)


def nabla_p_fd(imm: Immersion, u, h: float = DEFAULT_STEP, q: QuaternionicStructure | None = None,
               stencil: StencilData | None = None, full: bool = False) -> float:
    """Max norm of the finite-difference nabla P.

    By default over the slots (xi_m; xi_i, xi_b) with i in 0..2, matching the
    closed form; ``full=True`` includes the purely quaternionic slots.
    """
    D = nabla_p_fd_tensor(imm, u, h, q, stencil)
    if not full:
        D = D[:, :3]
    return float(np.max(np.linalg.norm(D, axis=-1)))


@dataclass
class GaussReport:
    xi3: float     # max |nabla xi_i - X_i|
    J: float       # max |(nabla J_i)(xi_a) - Y_i(., xi_a)| over the quaternionic span
    h: float
    fault: str | None


def gauss_consistency(imm: Immersion, u, h: float = DEFAULT_STEP, q: QuaternionicStructure | None = None,
                      fault: str | None = None, stencil: StencilData | None = None) -> GaussReport:
    """Compare intrinsic derivatives of xi_i and J_i with their closed forms.

    ``fault="zero_b"`` replaces the second fundamental form by zero on the
    closed-form side only, to confirm the comparison detects a wrong b.
    """
    q = standard_structures() if q is None else q
    sd = stencil_data(imm, u, h, q) if stencil is None else stencil
    base = sd.base
    closed_pf = base
    if fault == "zero_b":
        closed_pf = PointFrame(**{**base.__dict__, "h": np.zeros((7, 7)), "shape": np.zeros((7, 7)),
                                  "dn": np.zeros((7, 8))})
    elif fault is not None:
        raise ValueError(f"unknown fault {fault!r}")
    ft = frame_tensors(closed_pf, q)
    # (a) nabla_{xi_m} xi_i against X_i(xi_m)
    xi3 = 0.0
    for i in range(3):
        diff = sd.A[:, :, i] - ft.X[i]
        xi3 = max(xi3, float(np.max(np.linalg.norm(diff, axis=-1))))
    # (b) (nabla_{xi_m} J_i)(eta) = nabla(J_i eta) - J_i(nabla eta) against h(xi_m, eta) xi_i
    J = q.matrices(False)
    V = base.frame_chart
    jres = 0.0
    for i in range(3):
        def chart_of_J(pf):
            w = J[i] @ pf.frame
            w = w - np.outer(pf.n, pf.n @ w)
            return pf.ginv @ (pf.F.T @ w)
        Z = chart_of_J(base)
        dZ = np.empty((7, 7, 7))
        for a, (plus, minus) in enumerate(sd.frames):
            dZ[a] = (chart_of_J(plus) - chart_of_J(minus)) / (2 * h)
        B = _kernels.covariant_derivative(V, Z, dZ, sd.gamma, base.g)
        Ki = np.asarray(ft.K[i], dtype=float)
        for a in QUAT:
            lhs = B[:, :, a] - sd.A[:, :, a] @ Ki.T
            rhs = np.asarray(ft.Y[i, :, a], dtype=float)
            jres = max(jres, float(np.max(np.linalg.norm(lhs - rhs, axis=-1))))
    return GaussReport(xi3, jres, h, fault)


# --------------------------------------------------------------------------
# one-stop point evaluation
# --------------------------------------------------------------------------

@dataclass
class PointResult:
    u: list
    status: str                      # "ok" or "skipped"
    reason: str | None = None
    residuals: HolonomyResiduals | None = None


def check_point(imm: Immersion, u, h: float = DEFAULT_STEP, tol: float | None = None,
                q: QuaternionicStructure | None = None, exact: bool = False,
                with_fd: bool = True) -> PointResult:
    """Residuals, closed-form and finite-difference nabla P at one chart point.

    Frame-construction failures are reported as a skipped point.
    """
    q = standard_structures() if q is None else q
    tol = default_tol(imm) if tol is None else tol
    u_in = [float(x) for x in np.asarray(u, dtype=object)]
    try:
        if exact:
            u_ex = as_mode(np.asarray(u, dtype=object), True)
            pf = point_frame(imm, u_ex, h, q, exact=True)
        else:
            pf = point_frame(imm, np.asarray(u, dtype=float), h, q, exact=False)
        floor = noise_floor(imm, h, np.asarray(pf.h, dtype=float))
        res = final_residuals(pf, q, tol, floor=floor)
        if with_fd:
            D = nabla_p_fd_tensor(imm, pf.u, h, q, stencil_data(imm, pf.u, h, q, base=pf))
            norms = np.linalg.norm(D, axis=-1)
            res.r_nablaP_fd = float(np.max(norms[:, :3]))
            res.diagnostics["nabla_p_fd_full"] = float(np.max(norms))
    except FrameSmoothnessError as exc:
        return PointResult(u_in, "skipped", f"frame-smoothness: {exc}")
    except (FrameError, RankDeficiencyError, ImmersionError) as exc:
        return PointResult(u_in, "skipped", f"frame-construction: {exc}")
    return PointResult([float(x) for x in pf.u], "ok", None, res)


__all__ = [
    "CROSS_CONVENTION",
    "PARALLEL",
    "NOT_PARALLEL",
    "INCONCLUSIVE",
    "InducedCross",
    "FrameTensors",
    "HolonomyResiduals",
    "GaussReport",
    "PointResult",
    "induced_cross",
    "x_tensor",
    "x_normal_part",
    "y_tensor",
    "frame_tensors",
    "calc1",
    "calc2",
    "final2_terms",
    "calc3",
    "closed_nabla_p_slots",
    "final_residuals",
    "nabla_p_closed",
    "nabla_p_fd",
    "nabla_p_fd_tensor",
    "stencil_data",
    "gauss_consistency",
    "check_point",
    "classify",
    "noise_floor",
    "default_tol",
]

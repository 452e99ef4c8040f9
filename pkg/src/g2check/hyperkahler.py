"""The flat hyper-Kähler model R^8 = H^2.

Coordinates are identified with quaternion pairs by
``(x1, ..., x8) -> (x1 + x2 i + x3 j + x4 k, x5 + x6 i + x7 j + x8 k)`` and the
complex structures J1, J2, J3 are LEFT multiplication by i, j, k.  With this
choice ``J1 e1 = e2`` and ``J1 J2 = J3``.  The structures are constant, so they
are parallel for the Euclidean connection on R^8 and on any flat torus quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .errors import StructureInvalidError
from .linalg_core import AltForm, Metric, eye, exact_array, float_array, is_exact, max_abs, wedge

QUATERNION_CONVENTION = (
    "left multiplication by i,j,k on H^2; "
    "(x1..x8) -> (x1+x2 i+x3 j+x4 k, x5+x6 i+x7 j+x8 k); J1 e1 = e2; J1 J2 = J3"
)


def _quat_mul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def _left_mult_matrix(unit) -> np.ndarray:
    """8x8 matrix of left multiplication by a unit quaternion on both H factors."""
    block = np.empty((4, 4), dtype=object)
    for col in range(4):
        e = [0, 0, 0, 0]
        e[col] = 1
        block[:, col] = _quat_mul(unit, e)
    m = exact_array(np.zeros((8, 8), dtype=int))
    m[:4, :4] = exact_array(block)
    m[4:, 4:] = exact_array(block)
    return m


@dataclass(frozen=True)
class QuaternionicStructure:
    """Triple (J1, J2, J3) of 8x8 matrices acting on column vectors."""

    J: tuple[np.ndarray, np.ndarray, np.ndarray]
    _float: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.J) != 3 or any(np.shape(m) != (8, 8) for m in self.J):
            raise StructureInvalidError("a quaternionic structure is three 8x8 matrices")
        object.__setattr__(self, "_float", tuple(float_array(m) for m in self.J))

    @property
    def exact(self) -> bool:
        return all(is_exact(m) for m in self.J)

    def matrices(self, exact: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The three matrices in the requested arithmetic mode."""
        if exact:
            if not self.exact:
                raise StructureInvalidError("structure has float entries; no exact form available")
            return self.J
        return self._float

    def __iter__(self):
        return iter(self.J)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.J[i]


def standard_structures() -> QuaternionicStructure:
    units = ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    mats = []
    for u in units:
        m = _left_mult_matrix(u)
        m.setflags(write=False)
        mats.append(m)
    return QuaternionicStructure(tuple(mats))


@dataclass(frozen=True)
class StructureReport:
    residuals: dict[str, object]
    valid: bool


def validate_structure(q: QuaternionicStructure, tol: float = 0.0) -> StructureReport:
    """Residuals of the quaternion relations and of orthogonality.

    Never raises on bad input; ``valid`` is True iff every residual is within
    ``tol`` (exactly zero by default).
    """
    J = q.J
    exact = q.exact
    ident = eye(8, exact)
    res: dict[str, object] = {}
    for i in range(3):
        res[f"J{i + 1}^2+I"] = max_abs(J[i] @ J[i] + ident)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        res[f"J{i + 1}J{j + 1}-J{k + 1}"] = max_abs(J[i] @ J[j] - J[k])
        res[f"J{j + 1}J{i + 1}+J{k + 1}"] = max_abs(J[j] @ J[i] + J[k])
    for i in range(3):
        res[f"J{i + 1}^TJ{i + 1}-I"] = max_abs(J[i].T @ J[i] - ident)
    valid = all(float(v) <= tol for v in res.values())
    return StructureReport(res, valid)


@dataclass(frozen=True)
class KahlerForms:
    omega: tuple[AltForm, AltForm, AltForm]

    def top_power(self, i: int) -> AltForm:
        """omega_i ^ omega_i ^ omega_i ^ omega_i, an 8-form."""
        w = self.omega[i]
        return wedge(wedge(w, w), wedge(w, w))

    def nondegenerate(self) -> bool:
        return all(not self.top_power(i).is_zero() for i in range(3))

    def __getitem__(self, i: int) -> AltForm:
        return self.omega[i]


def kahler_forms(q: QuaternionicStructure, g: Metric) -> KahlerForms:
    """omega_i(u, v) = g(J_i u, v)."""
    forms = []
    for i, Ji in enumerate(q.matrices(g.exact and q.exact)):
        # B[a, b] = omega_i(e_a, e_b) = (J_i e_a)^T G e_b
        B = Ji.T @ g.matrix
        asym = max_abs(B + B.T)
        if (asym != 0) if g.exact else asym > 1e-12:
            raise StructureInvalidError(f"g(J{i + 1} u, v) is not antisymmetric (residual {float(asym):.3g})")
        forms.append(AltForm.from_tensor(B))
    return KahlerForms(tuple(forms))


def orthonormal_quadruple_residual(q: QuaternionicStructure, u: np.ndarray) -> object:
    """Max deviation of the Gram matrix of (u, J1 u, J2 u, J3 u) from |u|^2 I."""
    exact = q.exact and is_exact(u)
    J = q.matrices(exact)
    vs = np.column_stack([u] + [Ji @ u for Ji in J])
    G = vs.T @ vs
    n2 = u @ u
    return max_abs(G - n2 * eye(4, exact))


__all__ = [
    "QUATERNION_CONVENTION",
    "QuaternionicStructure",
    "StructureReport",
    "KahlerForms",
    "standard_structures",
    "validate_structure",
    "kahler_forms",
    "orthonormal_quadruple_residual",
]

"""Exact-rational and float64 linear and exterior algebra in dimensions 7 and 8.

Vectors and matrices are plain numpy arrays.  An array with ``dtype=object``
holding :class:`fractions.Fraction` entries is *exact*; a ``float64`` array is
*float*.  Every routine here inspects the dtype and takes the matching path, so
the same code serves the zero-residual algebraic checks and the
finite-difference geometry.

Alternating forms use the determinant convention: no factorial factors, so
``(x^1 ^ x^2)(e_1, e_2) == 1``.  Coefficients are stored in lexicographic order
of strictly increasing 0-based multi-indices.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionError,
    NotRationalError,
    RankDeficiencyError,
    SingularMetricError,
    ContractError,
)

Scalar = Fraction | float

ALLOWED_DIMS = (7, 8)


# --------------------------------------------------------------------------
# scalars and arrays
# --------------------------------------------------------------------------

def is_exact(a) -> bool:
    if isinstance(a, np.ndarray):
        return a.dtype == object
    return isinstance(a, (Fraction, int)) and not isinstance(a, bool)


def exact_array(x) -> np.ndarray:
    """Object array of Fractions.  Floats are converted exactly (dyadic)."""
    arr = np.asarray(x, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for i, v in enumerate(flat_in):
        flat_out[i] = v if isinstance(v, Fraction) else Fraction(v)
    return out


def float_array(x) -> np.ndarray:
    return np.asarray(x).astype(float)


def as_mode(x, exact: bool) -> np.ndarray:
    return exact_array(x) if exact else float_array(x)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def eye(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def max_abs(a) -> Scalar:
    """Largest absolute entry; 0 for an empty array.  Exact input stays exact."""
    arr = np.asarray(a)
    if arr.size == 0:
        return Fraction(0) if is_exact(arr) else 0.0
    return max(abs(v) for v in arr.reshape(-1)) if is_exact(arr) else float(np.max(np.abs(arr)))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b`` for 1-D or 2-D operands; exact operands skip zero entries.

    Object-dtype matmul pays a Fraction operation for every product, zeros
    included, which dominates the exact pipeline on sparse frames.
    """
    a, b = np.asarray(a), np.asarray(b)
    if not (is_exact(a) or is_exact(b)):
        return a @ b
    a2 = a if a.ndim == 2 else a[None, :]
    b2 = b if b.ndim == 2 else b[:, None]
    out = zeros((a2.shape[0], b2.shape[1]), True)
    for i in range(a2.shape[0]):
        acc = out[i]
        for k in range(a2.shape[1]):
            aik = a2[i, k]
            if aik:
                acc += aik * b2[k]
        out[i] = acc
    if a.ndim == 1:
        out = out[0]
    if b.ndim == 1:
        out = out[..., 0]
    return out


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n < 2 ** 1000 else 1 << (n.bit_length() // k)
    # Newton refinement so huge integers are handled exactly
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if abs(nr - r) <= 1:
            break
        r = nr
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def root_exact(q: Fraction, k: int) -> Fraction:
    """Exact real k-th root of a rational; odd k accepts negative input."""
    q = Fraction(q)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            raise NotRationalError(f"even root of negative number {q}")
        sign, q = -1, -q
    num = integer_root(q.numerator, k)
    den = integer_root(q.denominator, k)
    if num is None or den is None:
        raise NotRationalError(f"{k}-th root of {q} is irrational")
    return sign * Fraction(num, den)


def sqrt_exact(q: Fraction) -> Fraction:
    return root_exact(q, 2)


def scalar_sqrt(x: Scalar) -> Scalar:
    return sqrt_exact(x) if isinstance(x, Fraction) else math.sqrt(x)


# --------------------------------------------------------------------------
# dense linear algebra
# --------------------------------------------------------------------------

def _gauss_exact(m: np.ndarray, rhs: np.ndarray | None):
    """Row-reduce a copy of ``m`` (and ``rhs``); return (det, solution-or-None)."""
    a = [list(row) for row in m]
    n = len(a)
    if rhs is None:
        b = None
    elif rhs.ndim == 1:
        b = [[v] for v in rhs]
    else:
        b = [list(r) for r in rhs]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0), None
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            if b is not None:
                b[c], b[piv] = b[piv], b[c]
            det = -det
        p = a[c][c]
        det *= p
        for r in range(c + 1, n):
            f = a[r][c]
            if f == 0:
                continue
            f = f / p
            row_c = a[c]
            row_r = a[r]
            for j in range(c, n):
                row_r[j] -= f * row_c[j]
            if b is not None:
                b[r] = [x - f * y for x, y in zip(b[r], b[c])]
    if b is None:
        return det, None
    ncols = len(b[0])
    x = [[Fraction(0)] * ncols for _ in range(n)]
    for r in range(n - 1, -1, -1):
        for j in range(ncols):
            s = b[r][j] - sum(a[r][k] * x[k][j] for k in range(r + 1, n))
            x[r][j] = s / a[r][r]
    return det, x


def det(m: np.ndarray) -> Scalar:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"det needs a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        return Fraction(1) if is_exact(m) else 1.0
    if is_exact(m):
        return _gauss_exact(m, None)[0]
    return float(np.linalg.det(m))


def solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    b = np.asarray(b)
    if is_exact(m) or is_exact(b):
        m, b = exact_array(m), exact_array(b)
        d, x = _gauss_exact(m, b)
        if d == 0:
            raise SingularMetricError("singular matrix in exact solve")
        out = exact_array(x)
        return out.reshape(b.shape)
    return np.linalg.solve(m, b)


def inv(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if is_exact(m):
        return solve(m, eye(m.shape[0], True))
    return np.linalg.inv(m)


def permutation_sign(perm: Sequence[int]) -> int:
    """Parity of a sequence of distinct integers (inversion count); 0 on repeats."""
    perm = list(perm)
    if len(set(perm)) != len(perm):
        return 0
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def vector(components: Iterable, exact: bool | None = None) -> np.ndarray:
    arr = np.asarray(list(components), dtype=object)
    if arr.ndim != 1 or arr.shape[0] not in ALLOWED_DIMS:
        raise DimensionError(f"vectors live in dimension 7 or 8, got shape {arr.shape}")
    if exact is None:
        exact = all(isinstance(v, (int, Fraction)) for v in arr)
    return as_mode(arr, exact)


def basis(dim: int, exact: bool = True) -> list[np.ndarray]:
    """Standard basis e_1..e_dim (returned 0-based: ``basis(7)[0]`` is e_1)."""
    ident = eye(dim, exact)
    return [ident[i].copy() for i in range(dim)]


# --------------------------------------------------------------------------
# alternating forms
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def multi_indices(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(dim), k))


@lru_cache(maxsize=None)
def _index_position(dim: int, k: int) -> Mapping[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(multi_indices(dim, k))}


class AltForm:
    """Alternating k-form on R^dim with constant coefficients.

    Immutable: ``coeffs`` is a tuple aligned with :func:`multi_indices`.
    """

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Sequence[Scalar]):
        if dim < 1 or not 0 <= degree <= dim:
            raise DimensionError(f"degree {degree} invalid in dimension {dim}")
        expected = math.comb(dim, degree)
        coeffs = tuple(coeffs)
        if len(coeffs) != expected:
            raise DimensionError(f"need {expected} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("AltForm is immutable")

    # ---- construction -----------------------------------------------------
    @classmethod
    def zero(cls, dim: int, degree: int, exact: bool = True) -> "AltForm":
        z = Fraction(0) if exact else 0.0
        return cls(dim, degree, [z] * math.comb(dim, degree))

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Mapping[Sequence[int], Scalar],
                   exact: bool = True) -> "AltForm":
        """Build from ``{index tuple: coefficient}``.

        Index tuples are 0-based and may be unsorted; the permutation sign is
        applied while sorting.  Repeated indices are rejected.
        """
        coeffs = list(cls.zero(dim, degree, exact).coeffs)
        pos = _index_position(dim, degree)
        for idx, c in terms.items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DimensionError(f"index {idx} has wrong length for degree {degree}")
            s = permutation_sign(idx)
            if s == 0:
                raise DimensionError(f"repeated index in {idx}")
            if any(not 0 <= i < dim for i in idx):
                raise DimensionError(f"index {idx} out of range for dim {dim}")
            c = Fraction(c) if exact else float(c)
            coeffs[pos[tuple(sorted(idx))]] += s * c
        return cls(dim, degree, coeffs)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "AltForm":
        """Read coefficients off a fully antisymmetric array (no alternation check)."""
        k = tensor.ndim
        dim = tensor.shape[0]
        return cls(dim, k, [tensor[idx] for idx in multi_indices(dim, k)])

    # ---- access -----------------------------------------------------------
    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def __getitem__(self, idx: Sequence[int]) -> Scalar:
        idx = tuple(idx)
        s = permutation_sign(idx)
        zero = Fraction(0) if self.exact else 0.0
        if s == 0:
            return zero
        return s * self.coeffs[_index_position(self.dim, self.degree)[tuple(sorted(idx))]]

    def terms(self) -> dict[tuple[int, ...], Scalar]:
        return {idx: c for idx, c in zip(multi_indices(self.dim, self.degree), self.coeffs) if c != 0}

    def to_tensor(self) -> np.ndarray:
        """Fully antisymmetric dense array with ``T[I] = self[I]``."""
        exact = self.exact
        t = zeros((self.dim,) * self.degree, exact)
        for idx, c in zip(multi_indices(self.dim, self.degree), self.coeffs):
            if c == 0:
                continue
            for perm in itertools.permutations(range(self.degree)):
                t[tuple(idx[p] for p in perm)] = permutation_sign(perm) * c
        return t

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs)

    def to_float(self) -> "AltForm":
        return AltForm(self.dim, self.degree, [float(c) for c in self.coeffs])

    # ---- arithmetic -------------------------------------------------------
    def _check_same(self, other: "AltForm"):
        if not isinstance(other, AltForm) or (self.dim, self.degree) != (other.dim, other.degree):
            raise DimensionError("forms must share dimension and degree")

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check_same(other)
        return AltForm(self.dim, self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "AltForm") -> "AltForm":
        self._check_same(other)
        return AltForm(self.dim, self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "AltForm":
        return AltForm(self.dim, self.degree, [-a for a in self.coeffs])

    def __mul__(self, s: Scalar) -> "AltForm":
        return AltForm(self.dim, self.degree, [s * a for a in self.coeffs])

    __rmul__ = __mul__

    def __xor__(self, other: "AltForm") -> "AltForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, AltForm):
            return NotImplemented
        return (self.dim, self.degree, self.coeffs) == (other.dim, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, self.coeffs))

    def __repr__(self):
        body = " + ".join(f"{c}*x^{''.join(str(i + 1) for i in idx)}" for idx, c in self.terms().items())
        return f"AltForm(dim={self.dim}, degree={self.degree}, {body or '0'})"

    def __call__(self, *vs) -> Scalar:
        return evaluate(self, list(vs))


def _merge_sign(i: tuple[int, ...], j: tuple[int, ...]) -> int:
    """Sign of the shuffle sorting the concatenation i+j (both already sorted)."""
    inversions = 0
    for a in i:
        for b in j:
            if a > b:
                inversions += 1
    return -1 if inversions % 2 else 1


def wedge(a: AltForm, b: AltForm) -> AltForm:
    if a.dim != b.dim:
        raise DimensionError(f"wedge of forms on R^{a.dim} and R^{b.dim}")
    if a.degree + b.degree > a.dim:
        raise DimensionError(f"degree {a.degree}+{b.degree} exceeds dimension {a.dim}")
    dim, k = a.dim, a.degree + b.degree
    exact = a.exact and b.exact
    out = list(AltForm.zero(dim, k, exact).coeffs)
    pos = _index_position(dim, k)
    bterms = b.terms()
    for ia, ca in a.terms().items():
        sa = set(ia)
        for ib, cb in bterms.items():
            if sa.intersection(ib):
                continue
            out[pos[tuple(sorted(ia + ib))]] += _merge_sign(ia, ib) * ca * cb
    return AltForm(dim, k, out)


def interior(v: np.ndarray, a: AltForm) -> AltForm:
    v = np.asarray(v)
    if v.shape != (a.dim,):
        raise DimensionError(f"vector of shape {v.shape} cannot contract a form on R^{a.dim}")
    if a.degree < 1:
        raise DimensionError("interior product of a 0-form")
    exact = a.exact and is_exact(v)
    out = list(AltForm.zero(a.dim, a.degree - 1, exact).coeffs)
    pos = _index_position(a.dim, a.degree - 1)
    for idx, c in a.terms().items():
        for r, i in enumerate(idx):
            if v[i] == 0:
                continue
            rest = idx[:r] + idx[r + 1:]
            out[pos[rest]] += (-1) ** r * v[i] * c
    return AltForm(a.dim, a.degree - 1, out)


def evaluate(a: AltForm, vs: Sequence[np.ndarray]) -> Scalar:
    if len(vs) != a.degree:
        raise DimensionError(f"{a.degree}-form evaluated on {len(vs)} vectors")
    if a.degree == 0:
        return a.coeffs[0]
    m = np.column_stack([np.asarray(v) for v in vs])
    if m.shape[0] != a.dim:
        raise DimensionError(f"vectors of dimension {m.shape[0]} for a form on R^{a.dim}")
    exact = a.exact and is_exact(m)
    if not exact:
        m = float_array(m)
    total = Fraction(0) if exact else 0.0
    for idx, c in a.terms().items():
        total += c * det(m[list(idx), :])
    return total


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------

class Metric:
    """Symmetric positive-definite bilinear form given by its Gram matrix."""

    def __init__(self, matrix, tol: float = 1e-12):
        m = np.asarray(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"metric must be square, got {m.shape}")
        self.exact = is_exact(m)
        m = as_mode(m, self.exact)
        self.dim = m.shape[0]
        asym = max_abs(m - m.T)
        if (asym != 0) if self.exact else (asym > tol * max(1.0, float(max_abs(m)))):
            raise SingularMetricError(f"metric not symmetric (asymmetry {float(asym):.3g})")
        if self.exact:
            for k in range(1, self.dim + 1):
                if det(m[:k, :k]) <= 0:
                    raise SingularMetricError(f"leading minor {k} is not positive")
        else:
            try:
                np.linalg.cholesky(m)
            except np.linalg.LinAlgError as exc:
                raise SingularMetricError("metric not positive definite") from exc
        m.setflags(write=False)
        self.matrix = m
        self._inverse = None

    @classmethod
    def euclidean(cls, dim: int, exact: bool = True) -> "Metric":
        return cls(eye(dim, exact))

    @property
    def inverse(self) -> np.ndarray:
        if self._inverse is None:
            self._inverse = inv(self.matrix)
            self._inverse.setflags(write=False)
        return self._inverse

    def inner(self, u, v) -> Scalar:
        return np.asarray(u) @ self.matrix @ np.asarray(v)

    def norm2(self, u) -> Scalar:
        return self.inner(u, u)

    def __repr__(self):
        return f"Metric(dim={self.dim}, exact={self.exact})"


def orthonormalize(vs: Sequence[np.ndarray], g: Metric, tol: float = 1e-12) -> list[np.ndarray]:
    """Gram-Schmidt with respect to ``g``.

    Exact input yields exact output when every norm is rational; otherwise
    :class:`NotRationalError` is raised (use float input for such families).
    """
    out: list[np.ndarray] = []
    for k, v in enumerate(vs):
        v = np.asarray(v)
        if v.shape != (g.dim,):
            raise DimensionError(f"vector {k} has shape {v.shape}, metric has dim {g.dim}")
        exact = g.exact and is_exact(v)
        w = as_mode(v, exact)
        scale = abs(g.norm2(w))
        for e in out:
            w = w - g.inner(e, w) * e
        n2 = g.norm2(w)
        if (n2 == 0) if exact else (n2 <= (tol ** 2) * max(1.0, float(scale))):
            raise RankDeficiencyError(f"vector {k} lies in the span of the previous ones", k)
        w = w / scalar_sqrt(n2)
        out.append(w)
    return out


def gram(vs: Sequence[np.ndarray], g: Metric) -> np.ndarray:
    m = np.column_stack(list(vs))
    return m.T @ g.matrix @ m


def require(cond: bool, message: str):
    if not cond:
        raise ContractError(message)

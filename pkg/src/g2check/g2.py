"""The model G2-structure on R^7 and the 3-form / cross-product dictionary.

A cross product is stored as its structure constants ``table[a, b, c]``, the
c-th component of ``P(e_a, e_b)``.  The 3-form and the product determine each
other through ``omega(u, v, w) = g(P(u, v), w)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionError, InvalidProductError, NotAG2FormError, NotRationalError
from .linalg_core import (
    AltForm,
    Metric,
    Scalar,
    as_mode,
    det,
    exact_array,
    interior,
    is_exact,
    max_abs,
    root_exact,
    wedge,
    zeros,
    eye,
)

ThreeForm = AltForm

# 1-based labels, exactly as the model form is usually written
OMEGA0_TERMS = (
    ((1, 2, 7), 1),
    ((1, 3, 6), 1),
    ((1, 4, 5), 1),
    ((2, 3, 5), 1),
    ((2, 4, 6), -1),
    ((3, 4, 7), 1),
    ((5, 6, 7), 1),
)

ALTERNATION_CONVENTION = "determinant convention, no factorials: (x^1 ^ x^2)(e1, e2) = 1"


def omega0(exact: bool = True) -> ThreeForm:
    terms = {tuple(i - 1 for i in idx): s for idx, s in OMEGA0_TERMS}
    return AltForm.from_terms(7, 3, terms, exact=exact)


def as_three_form(form: AltForm) -> ThreeForm:
    if form.dim != 7 or form.degree != 3:
        raise DimensionError(f"expected a 3-form on R^7, got degree {form.degree} on R^{form.dim}")
    return form


@dataclass(frozen=True)
class CrossProduct:
    table: np.ndarray
    metric: Metric
    basis: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.table.shape != (7, 7, 7):
            raise DimensionError(f"cross-product table must be 7x7x7, got {self.table.shape}")

    @property
    def exact(self) -> bool:
        return is_exact(self.table)

    def __call__(self, u, v) -> np.ndarray:
        if self.exact:
            return _sparse_bilinear(self._nonzero(), u, v)
        return bilinear(self.table, u, v)

    def _nonzero(self):
        cached = self.__dict__.get("_nz")
        if cached is None:
            cached = [(a, b, c, self.table[a, b, c]) for a in range(7) for b in range(7)
                      for c in range(7) if self.table[a, b, c] != 0]
            object.__setattr__(self, "_nz", cached)
        return cached

    def antisymmetry_residual(self) -> Scalar:
        return max_abs(self.table + self.table.transpose(1, 0, 2))


def _sparse_bilinear(nonzero, u, v) -> np.ndarray:
    out = [Fraction(0)] * 7
    for a, b, c, t in nonzero:
        ua = u[a]
        if ua:
            vb = v[b]
            if vb:
                out[c] += t * ua * vb
    return exact_array(out) if all(isinstance(x, Fraction) for x in out) else np.asarray(out, dtype=float)


def bilinear(table: np.ndarray, u, v) -> np.ndarray:
    """sum_ab u^a v^b table[a, b, :]"""
    u = np.asarray(u)
    v = np.asarray(v)
    if is_exact(table) or is_exact(u) or is_exact(v):
        return v @ (u @ table.reshape(7, 49)).reshape(7, 7)
    from ._kernels import cross_apply

    return cross_apply(np.asarray(table, dtype=float), np.asarray(u, dtype=float),
                       np.asarray(v, dtype=float))


def cross_from_form(form: ThreeForm, g: Metric) -> CrossProduct:
    """P^d_ab = g^{dc} omega_abc."""
    as_three_form(form)
    if g.dim != 7:
        raise DimensionError("cross products live on 7-dimensional spaces")
    W = form.to_tensor()
    exact = form.exact and g.exact
    W = as_mode(W, exact)
    ginv = g.inverse if exact else as_mode(g.inverse, False)
    table = W @ ginv.T  # last index contracted with g^{dc}
    return CrossProduct(table, g)


def form_from_cross(P: CrossProduct, g: Metric | None = None, tol: float = 1e-12) -> ThreeForm:
    """omega_abc = g_cd P^d_ab; raises if the result is not fully alternating."""
    g = P.metric if g is None else g
    W = P.table @ g.matrix
    exact = is_exact(W)
    checks = (W + W.transpose(1, 0, 2), W + W.transpose(0, 2, 1), W + W.transpose(2, 1, 0))
    worst = max(max_abs(c) for c in checks)
    if (worst != 0) if exact else worst > tol:
        raise InvalidProductError(f"g(P(u, v), w) is not alternating (residual {float(worst):.3g})")
    return AltForm.from_tensor(W)


@dataclass
class CrossAxiomReport:
    """Max residuals of the three compatibility identities.

    ``orthogonality``: g(P(u,v), u), g(P(u,v), v)
    ``norm``: |P(u,v)|^2 - |u|^2|v|^2 + g(u,v)^2
    ``double_cross``: P(u, P(u,v)) + |u|^2 v - g(u,v) u
    ``failing`` names, per identity, the first pair with a nonzero residual:
    a basis pair when one fails, otherwise the random pair.
    """

    orthogonality: Scalar
    norm: Scalar
    double_cross: Scalar
    seed: int
    n_random: int
    failing: dict[str, "FailingPair"] = field(default_factory=dict)

    @property
    def residuals(self) -> dict[str, Scalar]:
        return {"orthogonality": self.orthogonality, "norm": self.norm, "double_cross": self.double_cross}

    def passed(self, tol: float = 0.0) -> bool:
        return all(float(r) <= tol for r in self.residuals.values())


@dataclass(frozen=True)
class FailingPair:
    """``kind='basis'``: (e_first, e_second), 0-based; ``kind='random'``: random pair number ``first``."""

    kind: str
    first: int
    second: int | None = None

    def __str__(self) -> str:
        if self.kind == "basis":
            return f"basis pair (e{self.first + 1}, e{self.second + 1})"
        return f"random pair #{self.first}"


def random_rational_vectors(rng: np.random.Generator, count: int, dim: int = 7) -> list[np.ndarray]:
    out = []
    for _ in range(count):
        num = rng.integers(-9, 10, size=dim)
        den = rng.integers(1, 6, size=dim)
        out.append(exact_array([Fraction(int(a), int(b)) for a, b in zip(num, den)]))
    return out


def _pair_residuals(P: CrossProduct, g: Metric, u, v):
    w = P(u, v)
    r_orth = max(abs(g.inner(w, u)), abs(g.inner(w, v)))
    guv = g.inner(u, v)
    r_norm = abs(g.norm2(w) - g.norm2(u) * g.norm2(v) + guv * guv)
    r_dc = max_abs(P(u, w) + g.norm2(u) * v - guv * u)
    return r_orth, r_norm, r_dc


def check_cross_axioms(P: CrossProduct, g: Metric | None = None, seed: int = 20110101,
                       n_random: int = 100) -> CrossAxiomReport:
    """Evaluate the identities on all basis pairs and on seeded random pairs.

    Exact tables get random rational vectors, so an exact product yields
    exactly zero residuals.
    """
    g = P.metric if g is None else g
    exact = P.exact and g.exact
    table = P.table if exact else as_mode(P.table, False)
    Pm = CrossProduct(table, g)
    ident = eye(7, exact)
    worst = [Fraction(0) if exact else 0.0] * 3
    names = ("orthogonality", "norm", "double_cross")
    failing: dict[str, FailingPair] = {}
    for a in range(7):
        for b in range(7):
            rs = _pair_residuals(Pm, g, ident[a], ident[b])
            for k, r in enumerate(rs):
                if r != 0 and names[k] not in failing and (exact or r > 1e-12):
                    failing[names[k]] = FailingPair("basis", a, b)
                worst[k] = max(worst[k], r)
    rng = np.random.default_rng(seed)
    us = random_rational_vectors(rng, n_random)
    vs = random_rational_vectors(rng, n_random)
    for n, (u, v) in enumerate(zip(us, vs)):
        if not exact:
            u, v = as_mode(u, False), as_mode(v, False)
        rs = _pair_residuals(Pm, g, u, v)
        for k, r in enumerate(rs):
            if r != 0 and names[k] not in failing and (exact or r > 1e-12 * (1 + float(g.norm2(u) * g.norm2(v)))):
                failing[names[k]] = FailingPair("random", n)
        worst = [max(w, r) for w, r in zip(worst, rs)]
    return CrossAxiomReport(worst[0], worst[1], worst[2], seed, n_random, failing)


def _bilinear_gram_from_form(form: ThreeForm) -> np.ndarray:
    """B[a, b] = coefficient of x^{1..7} in (i_a omega) ^ (i_b omega) ^ omega."""
    exact = form.exact
    ident = eye(7, exact)
    contracted = [interior(ident[a], form) for a in range(7)]
    B = zeros((7, 7), exact)
    for a in range(7):
        for b in range(a, 7):
            top = wedge(wedge(contracted[a], contracted[b]), form)
            B[a, b] = B[b, a] = top.coeffs[0]
    return B


def metric_from_form(form: ThreeForm) -> tuple[Metric, AltForm]:
    """Metric and volume form determined by a G2 3-form.

    Uses ``(i_u w) ^ (i_v w) ^ w = 6 g(u, v) vol_g``.  Writing B for the
    left-hand Gram matrix (divided by 6), ``B = g sqrt(det g) s`` with s the
    orientation sign, so ``det B = s det(g)^(9/2)`` and
    ``g = B / det(B)^(1/9)`` (real odd root).  Exact input stays exact when the
    ninth root is rational.
    """
    as_three_form(form)
    B = _bilinear_gram_from_form(form)
    exact = form.exact
    B = B / (Fraction(6) if exact else 6.0)
    d = det(B)
    if d == 0:
        raise NotAG2FormError("(i_u w)^(i_v w)^w is degenerate")
    if exact:
        try:
            scale = root_exact(d, 9)
        except NotRationalError:
            exact = False
            B = as_mode(B, False)
            d = float(d)
    if not exact:
        scale = float(np.sign(d) * abs(d) ** (1.0 / 9.0))
    gm = B / scale
    try:
        g = Metric(gm)
    except Exception as exc:  # not definite after normalization
        raise NotAG2FormError("3-form does not induce a definite metric") from exc
    orientation = 1 if d > 0 else -1
    dg = det(g.matrix)
    vol_coeff = orientation * (root_exact(dg, 2) if exact else float(np.sqrt(dg)))
    vol = AltForm(7, 7, [vol_coeff])
    return g, vol


__all__ = [
    "ALTERNATION_CONVENTION",
    "OMEGA0_TERMS",
    "ThreeForm",
    "CrossProduct",
    "CrossAxiomReport",
    "FailingPair",
    "omega0",
    "as_three_form",
    "bilinear",
    "cross_from_form",
    "form_from_cross",
    "check_cross_axioms",
    "metric_from_form",
    "random_rational_vectors",
]

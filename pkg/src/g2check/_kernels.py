"""Float64 inner kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``G2CHECK_NUMBA`` is not ``0``.
Both paths are always importable (``*_numpy`` / ``*_numba``) so tests and the
benchmark can compare them directly.

Index conventions
-----------------
``table[a, b, c]``  c-component of P(e_a, e_b)
``dg[a, b, c]``     d_a g_bc
``gamma[c, a, b]``  Christoffel symbol Gamma^c_ab
``A[m, d, c]``      <nabla_{xi_m} Z_c, xi_d>; Z_c = xi_c gives the frame connection
``out[m, a, b, d]`` d-component of (nabla_{xi_m} P)(xi_a, xi_b)
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("G2CHECK_NUMBA", "1") != "0"
BACKEND = "numba" if USE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numpy reference implementations
# --------------------------------------------------------------------------

def cross_apply_numpy(table, u, v):
    return np.einsum("abc,a,b->c", table, u, v)


def cross_apply_many_numpy(table, U, V):
    return np.einsum("abc,na,nb->nc", table, U, V)


def christoffel_numpy(ginv, dg):
    # lowered[d, a, b] = 1/2 (d_a g_bd + d_b g_ad - d_d g_ab)
    lowered = 0.5 * (dg.transpose(2, 0, 1) + dg.transpose(2, 1, 0) - dg)
    return np.einsum("cd,dab->cab", ginv, lowered)


def covariant_derivative_numpy(V, Z, dZ, gamma, G):
    # V: chart components of the orthonormal frame (columns); Z: fields to
    # differentiate, dZ[a] = d_a Z.  nabla_{d_a} Z_c = dZ[a] + Gamma_a Z
    cov = dZ + np.einsum("eaf,fc->aec", gamma, Z)
    W = np.einsum("ed,ef,afc->adc", V, G, cov)
    return np.einsum("am,adc->mdc", V, W)


def nabla_p_numpy(table, A):
    t1 = np.einsum("abc,mdc->mabd", table, A)
    t2 = np.einsum("mca,cbd->mabd", A, table)
    t3 = np.einsum("mcb,acd->mabd", A, table)
    return t1 - t2 - t3


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

def _cross_apply_loops(table, u, v):
    n = table.shape[0]
    out = np.zeros(n)
    for a in range(n):
        ua = u[a]
        if ua == 0.0:
            continue
        for b in range(n):
            w = ua * v[b]
            if w == 0.0:
                continue
            for c in range(n):
                out[c] += w * table[a, b, c]
    return out


def _cross_apply_many_loops(table, U, V):
    m = U.shape[0]
    n = table.shape[0]
    out = np.zeros((m, n))
    for k in range(m):
        for a in range(n):
            ua = U[k, a]
            for b in range(n):
                w = ua * V[k, b]
                for c in range(n):
                    out[k, c] += w * table[a, b, c]
    return out


def _christoffel_loops(ginv, dg):
    n = ginv.shape[0]
    out = np.zeros((n, n, n))
    for a in range(n):
        for b in range(a, n):
            for c in range(n):
                s = 0.0
                for d in range(n):
                    s += ginv[c, d] * (dg[a, b, d] + dg[b, a, d] - dg[d, a, b])
                out[c, a, b] = 0.5 * s
                out[c, b, a] = 0.5 * s
    return out


def _covariant_derivative_loops(V, Z, dZ, gamma, G):
    n = V.shape[0]
    cov = np.empty((n, n, n))
    for a in range(n):
        for e in range(n):
            for c in range(n):
                s = dZ[a, e, c]
                for f in range(n):
                    s += gamma[e, a, f] * Z[f, c]
                cov[a, e, c] = s
    GV = G @ V
    A = np.zeros((n, n, n))
    for a in range(n):
        Wa = GV.T @ cov[a]
        for m in range(n):
            vam = V[a, m]
            if vam == 0.0:
                continue
            for d in range(n):
                for c in range(n):
                    A[m, d, c] += vam * Wa[d, c]
    return A


def _nabla_p_loops(table, A):
    n = table.shape[0]
    out = np.zeros((n, n, n, n))
    for m in range(n):
        for a in range(n):
            for b in range(n):
                for d in range(n):
                    s = 0.0
                    for c in range(n):
                        s += table[a, b, c] * A[m, d, c]
                        s -= A[m, c, a] * table[c, b, d]
                        s -= A[m, c, b] * table[a, c, d]
                    out[m, a, b, d] = s
    return out


if HAVE_NUMBA:
    _jit = _numba.njit(cache=True, nogil=True)
    cross_apply_numba = _jit(_cross_apply_loops)
    cross_apply_many_numba = _jit(_cross_apply_many_loops)
    christoffel_numba = _jit(_christoffel_loops)
    covariant_derivative_numba = _jit(_covariant_derivative_loops)
    nabla_p_numba = _jit(_nabla_p_loops)
else:  # pragma: no cover
    cross_apply_numba = _cross_apply_loops
    cross_apply_many_numba = _cross_apply_many_loops
    christoffel_numba = _christoffel_loops
    covariant_derivative_numba = _covariant_derivative_loops
    nabla_p_numba = _nabla_p_loops


def _c(x):
    return np.ascontiguousarray(x, dtype=np.float64)


if USE_NUMBA:
    def cross_apply(table, u, v):
        return cross_apply_numba(_c(table), _c(u), _c(v))

    def cross_apply_many(table, U, V):
        return cross_apply_many_numba(_c(table), _c(U), _c(V))

    def christoffel(ginv, dg):
        return christoffel_numba(_c(ginv), _c(dg))

    def covariant_derivative(V, Z, dZ, gamma, G):
        return covariant_derivative_numba(_c(V), _c(Z), _c(dZ), _c(gamma), _c(G))

    def nabla_p(table, A):
        return nabla_p_numba(_c(table), _c(A))
else:
    cross_apply = cross_apply_numpy
    cross_apply_many = cross_apply_many_numpy
    christoffel = christoffel_numpy
    covariant_derivative = covariant_derivative_numpy
    nabla_p = nabla_p_numpy


def frame_connection(V, dV, gamma, G):
    """<nabla_{xi_m} xi_c, xi_d> for the frame with chart components V."""
    return covariant_derivative(V, V, dV, gamma, G)

"""Numba-compiled stencil kernels.

Same contracts as ``_kernels_numpy``; see that module for the layout and
slot-order documentation. The jitted loops avoid the large gather
temporaries of the numpy path.
"""

import numpy as np
from numba import njit

from ._kernels_numpy import _mixed_pairs


@njit(cache=True)
def _real_jet2_impl(u, idx, strides, h):
    d = strides.shape[0]
    m = idx.shape[0]
    d1 = np.empty((m, d), np.float64)
    d2 = np.empty((m, d, d), np.float64)
    inv2h = 1.0 / (2.0 * h)
    invh2 = 1.0 / (h * h)
    for k in range(m):
        i = idx[k]
        uc = u[i]
        for a in range(d):
            sa = strides[a]
            up = u[i + sa]
            um = u[i - sa]
            d1[k, a] = (up - um) * inv2h
            d2[k, a, a] = (up - 2.0 * uc + um) * invh2
            for b in range(a + 1, d):
                sb = strides[b]
                mixed = (
                    u[i + sa + sb] - u[i + sa - sb] - u[i - sa + sb] + u[i - sa - sb]
                ) * (0.25 * invh2)
                d2[k, a, b] = mixed
                d2[k, b, a] = mixed
    return d1, d2


def real_jet2(u, idx, strides, h):
    return _real_jet2_impl(u, idx, strides, float(h))


@njit(cache=True)
def _wirt_d1_impl(f, idx, strides, h, n, conj_dir):
    m = idx.shape[0]
    K = f.shape[1]
    out = np.empty((m, n, K), np.complex128)
    inv2h = 1.0 / (2.0 * h)
    sign = 1.0j if conj_dir else -1.0j
    for k in range(m):
        i = idx[k]
        for p in range(n):
            sx = strides[p]
            sy = strides[n + p]
            for c in range(K):
                dx = (f[i + sx, c] - f[i - sx, c]) * inv2h
                dy = (f[i + sy, c] - f[i - sy, c]) * inv2h
                out[k, p, c] = 0.5 * (dx + sign * dy)
    return out


def wirt_d1(f, idx, strides, h, n, conj_dir):
    return _wirt_d1_impl(f, idx, strides, float(h), n, bool(conj_dir))


@njit(cache=True)
def _wirt_lap_impl(f, idx, strides, h, n, G):
    m = idx.shape[0]
    K = f.shape[1]
    out = np.zeros((m, K), np.complex128)
    invh2 = 1.0 / (h * h)
    for k in range(m):
        i = idx[k]
        for p in range(n):
            for q in range(n):
                g = G[k, p, q]
                if p == q:
                    sx = strides[p]
                    sy = strides[n + p]
                    for c in range(K):
                        fc = f[i, c]
                        sec = (
                            f[i + sx, c] - 2.0 * fc + f[i - sx, c]
                            + f[i + sy, c] - 2.0 * fc + f[i - sy, c]
                        ) * invh2
                        out[k, c] += g * 0.25 * sec
                else:
                    sxp = strides[p]
                    syp = strides[n + p]
                    sxq = strides[q]
                    syq = strides[n + q]
                    for c in range(K):
                        xx = (
                            f[i + sxp + sxq, c] - f[i + sxp - sxq, c]
                            - f[i - sxp + sxq, c] + f[i - sxp - sxq, c]
                        )
                        yy = (
                            f[i + syp + syq, c] - f[i + syp - syq, c]
                            - f[i - syp + syq, c] + f[i - syp - syq, c]
                        )
                        xy = (
                            f[i + sxp + syq, c] - f[i + sxp - syq, c]
                            - f[i - sxp + syq, c] + f[i - sxp - syq, c]
                        )
                        yx = (
                            f[i + syp + sxq, c] - f[i + syp - sxq, c]
                            - f[i - syp + sxq, c] + f[i - syp - sxq, c]
                        )
                        w = 0.25 * 0.25 * invh2 * (xx + yy + 1.0j * (xy - yx))
                        out[k, c] += g * w
    return out


def wirt_lap(f, idx, strides, h, n, G):
    return _wirt_lap_impl(f, idx, strides, float(h), n, G)


@njit(cache=True)
def _newton_triplets_impl(Gr, Gi, idx, strides, h, n, col, pa, pb, pkind, pi, pj):
    d = 2 * n
    m = idx.shape[0]
    P = pa.shape[0]
    S = 1 + 2 * d + 4 * P
    rows = np.empty(m * S, np.int64)
    cols = np.empty(m * S, np.int64)
    vals = np.empty(m * S, np.float64)
    invh2 = 1.0 / (h * h)
    for k in range(m):
        i = idx[k]
        row = col[i]
        base = k * S
        center = -(n + 1.0)
        slot = 1
        for a in range(d):
            c2 = 0.25 * Gr[k, a % n, a % n]
            center -= 2.0 * invh2 * c2
            sa = strides[a]
            for sgn in (1, -1):
                nb = i + sgn * sa
                cv = col[nb]
                t = base + slot
                rows[t] = row
                if cv >= 0:
                    cols[t] = cv
                    vals[t] = c2 * invh2
                else:
                    cols[t] = row
                    vals[t] = 0.0
                slot += 1
        rows[base] = row
        cols[base] = row
        vals[base] = center
        for p in range(P):
            if pkind[p] == 2:
                cc = 0.5 * Gi[k, pi[p], pj[p]]
            else:
                cc = 0.5 * Gr[k, pi[p], pj[p]]
            v = cc * 0.25 * invh2
            sa = strides[pa[p]]
            sb = strides[pb[p]]
            for corner in range(4):
                if corner == 0:
                    nb = i + sa + sb
                    vv = v
                elif corner == 1:
                    nb = i + sa - sb
                    vv = -v
                elif corner == 2:
                    nb = i - sa + sb
                    vv = -v
                else:
                    nb = i - sa - sb
                    vv = v
                cv = col[nb]
                t = base + slot
                rows[t] = row
                if cv >= 0:
                    cols[t] = cv
                    vals[t] = vv
                else:
                    cols[t] = row
                    vals[t] = 0.0
                slot += 1
    return rows, cols, vals


def newton_triplets(Gr, Gi, idx, strides, h, n, col):
    pairs = _mixed_pairs(n)
    P = len(pairs)
    pa = np.empty(P, np.int64)
    pb = np.empty(P, np.int64)
    pkind = np.empty(P, np.int64)
    pi = np.empty(P, np.int64)
    pj = np.empty(P, np.int64)
    for t, (a, b, kind, i, j) in enumerate(pairs):
        pa[t], pb[t], pkind[t], pi[t], pj[t] = a, b, kind, i, j
    return _newton_triplets_impl(
        Gr, Gi, idx, strides, float(h), n, col, pa, pb, pkind, pi, pj
    )

"""Pure-numpy stencil kernels (gather based).

All kernels operate on flat C-order arrays. ``idx`` holds the flat indices
of the nodes to evaluate, ``strides`` the element stride of each grid axis,
so the neighbor of node ``i`` along axis ``a`` is ``i + strides[a]``.
Callers guarantee that every gathered neighbor index is in bounds and holds
a finite value; no masking happens here.

Axis order is (x_1..x_n, y_1..y_n), d = 2n axes total.
"""

import numpy as np


def real_jet2(u, idx, strides, h):
    """First and second central differences of a real field.

    Returns ``(d1, d2)`` with shapes (m, d) and (m, d, d); ``d2`` is filled
    symmetrically so it is exactly the discrete real Hessian.
    """
    d = strides.shape[0]
    m = idx.shape[0]
    d1 = np.empty((m, d), np.float64)
    d2 = np.empty((m, d, d), np.float64)
    uc = u[idx]
    inv2h = 1.0 / (2.0 * h)
    invh2 = 1.0 / (h * h)
    for a in range(d):
        sa = strides[a]
        up = u[idx + sa]
        um = u[idx - sa]
        d1[:, a] = (up - um) * inv2h
        d2[:, a, a] = (up - 2.0 * uc + um) * invh2
        for b in range(a + 1, d):
            sb = strides[b]
            mixed = (
                u[idx + sa + sb] - u[idx + sa - sb] - u[idx - sa + sb] + u[idx - sa - sb]
            ) * (0.25 * invh2)
            d2[:, a, b] = mixed
            d2[:, b, a] = mixed
    return d1, d2


def wirt_d1(f, idx, strides, h, n, conj_dir):
    """Wirtinger first derivatives of a complex field with K components.

    ``f`` has shape (N, K). Returns (m, n, K): entry [k, p] is
    0.5*(D_{x_p} - i D_{y_p}) f when ``conj_dir`` is False and
    0.5*(D_{x_p} + i D_{y_p}) f when it is True.
    """
    m = idx.shape[0]
    K = f.shape[1]
    out = np.empty((m, n, K), np.complex128)
    inv2h = 1.0 / (2.0 * h)
    sign = 1.0j if conj_dir else -1.0j
    for p in range(n):
        sx = strides[p]
        sy = strides[n + p]
        dx = (f[idx + sx] - f[idx - sx]) * inv2h
        dy = (f[idx + sy] - f[idx - sy]) * inv2h
        out[:, p, :] = 0.5 * (dx + sign * dy)
    return out


def wirt_lap(f, idx, strides, h, n, G):
    """Metric laplacian sum_{ij} G[., i, j] * (d_i d_jbar f) of a complex field.

    ``f`` has shape (N, K), ``G`` shape (m, n, n). Returns (m, K).
    The mixed Wirtinger second derivative is
    0.25*(f_{x_i x_j} + f_{y_i y_j} + i (f_{x_i y_j} - f_{y_i x_j})); for
    i == j the imaginary part cancels identically and is skipped.
    """
    m = idx.shape[0]
    K = f.shape[1]
    out = np.zeros((m, K), np.complex128)
    invh2 = 1.0 / (h * h)
    fc = f[idx]

    def d2ab(sa, sb):
        return (
            f[idx + sa + sb] - f[idx + sa - sb] - f[idx - sa + sb] + f[idx - sa - sb]
        ) * (0.25 * invh2)

    for i in range(n):
        for j in range(n):
            if i == j:
                sx = strides[i]
                sy = strides[n + i]
                sec = (
                    f[idx + sx] - 2.0 * fc + f[idx - sx]
                    + f[idx + sy] - 2.0 * fc + f[idx - sy]
                ) * invh2
                w = 0.25 * sec
            else:
                w = 0.25 * (
                    d2ab(strides[i], strides[j])
                    + d2ab(strides[n + i], strides[n + j])
                    + 1.0j * (d2ab(strides[i], strides[n + j]) - d2ab(strides[n + i], strides[j]))
                )
            out += G[:, i, j][:, None] * w
    return out


def newton_triplets(Gr, Gi, idx, strides, h, n, col):
    """COO triplets of the linearized operator sum u^{ij~} d_{ij~} - (n+1).

    ``Gr``/``Gi`` are the real and imaginary parts of the inverse mixed
    Hessian per node, ``col`` maps flat grid index to unknown column
    (-1 for nodes that are not unknowns). Skipped neighbors emit a zero
    diagonal entry so the triplet layout is identical across backends.

    Slot order per node: center, +a/-a per axis, then 4 corners per mixed
    pair in the fixed order xx, yy, xy.
    """
    d = 2 * n
    m = idx.shape[0]
    naxis = 2 * d
    pairs = _mixed_pairs(n)
    S = 1 + naxis + 4 * len(pairs)
    rows = np.empty(m * S, np.int64)
    cols = np.empty(m * S, np.int64)
    vals = np.empty(m * S, np.float64)

    invh2 = 1.0 / (h * h)
    row = col[idx]
    c2 = np.empty((m, d), np.float64)
    for a in range(d):
        c2[:, a] = 0.25 * Gr[:, a % n, a % n]

    def put(slot, node_flat, value):
        t = slice(slot, m * S, S)
        rows[t] = row
        cv = col[node_flat]
        ok = cv >= 0
        cols[t] = np.where(ok, cv, row)
        vals[t] = np.where(ok, value, 0.0)

    center = -(2.0 * invh2) * c2.sum(axis=1) - (n + 1.0)
    rows[0::S] = row
    cols[0::S] = row
    vals[0::S] = center

    slot = 1
    for a in range(d):
        sa = strides[a]
        put(slot, idx + sa, c2[:, a] * invh2)
        put(slot + 1, idx - sa, c2[:, a] * invh2)
        slot += 2
    for (a, b, kind, i, j) in pairs:
        if kind == 2:  # x_i y_j cross block, antisymmetric part of the inverse
            cc = 0.5 * Gi[:, i, j]
        else:
            cc = 0.5 * Gr[:, i, j]
        base = cc * (0.25 * invh2)
        sa = strides[a]
        sb = strides[b]
        put(slot, idx + sa + sb, base)
        put(slot + 1, idx + sa - sb, -base)
        put(slot + 2, idx - sa + sb, -base)
        put(slot + 3, idx - sa - sb, base)
        slot += 4
    return rows, cols, vals


def _mixed_pairs(n):
    """Mixed-derivative axis pairs the operator touches: xx, yy, then xy."""
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            pairs.append((i, j, 0, i, j))  # x_i x_j
    for i in range(n):
        for j in range(i + 1, n):
            pairs.append((n + i, n + j, 1, i, j))  # y_i y_j
    for i in range(n):
        for j in range(n):
            if i != j:
                pairs.append((i, n + j, 2, i, j))  # x_i y_j
    return pairs

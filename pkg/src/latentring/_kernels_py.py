"""Pure-NumPy kernels: the fallback backend.

Mirrors latentring._native operation for operation. The rasterizer keeps the
exact same per-pixel arithmetic (and the extension is compiled with FMA
contraction off) so both backends quantize to identical uint8 images.
"""

from __future__ import annotations

import math

import numpy as np


def raster_segments(
    segs: np.ndarray, img: np.ndarray, x_origin: float = 0.0, y_origin: float = 0.0
) -> None:
    """Max-composite anti-aliased segments into ``img`` (float64, in place).

    ``segs`` rows are (ax, ay, bx, by, halfwidth, amplitude); per-pixel
    contribution is amplitude * clamp(halfwidth - dist(pixel, segment), 0, 1)
    with pixel (ix, iy) sampled at (ix + 0.5 + x_origin, iy + 0.5 + y_origin).
    A centered origin makes mirror-symmetric segment sets rasterize to exact
    mirror images (x negation is lossless).
    """
    h, w = img.shape
    for ax, ay, bx, by, hw, amp in segs:
        x0 = max(0, int(math.floor(min(ax, bx) - hw - 0.5 - x_origin)))
        x1 = min(w - 1, int(math.ceil(max(ax, bx) + hw - 0.5 - x_origin)))
        y0 = max(0, int(math.floor(min(ay, by) - hw - 0.5 - y_origin)))
        y1 = min(h - 1, int(math.ceil(max(ay, by) + hw - 0.5 - y_origin)))
        if x1 < x0 or y1 < y0:
            continue
        px = np.arange(x0, x1 + 1, dtype=np.float64) + 0.5 + x_origin
        py = (np.arange(y0, y1 + 1, dtype=np.float64) + 0.5 + y_origin)[:, None]
        # midpoint-centered projection: bitwise symmetric under endpoint swap
        # and x negation, which the exact-mirror decoder property relies on
        mx = (ax + bx) / 2.0
        my = (ay + by) / 2.0
        hx = (bx - ax) / 2.0
        hy = (by - ay) / 2.0
        l2 = hx * hx + hy * hy
        if l2 > 0.0:
            t = ((px - mx) * hx + (py - my) * hy) / l2
            t = np.clip(t, -1.0, 1.0)
            qx = mx + t * hx
            qy = my + t * hy
        else:
            qx, qy = mx, my
        ddx = px - qx
        ddy = py - qy
        dist = np.sqrt(ddx * ddx + ddy * ddy)
        contrib = amp * np.clip(hw - dist, 0.0, 1.0)
        region = img[y0 : y1 + 1, x0 : x1 + 1]
        np.maximum(region, contrib, out=region)


def _augment(cost, free_rows, rowsol, colsol, v):
    """Shortest augmenting path (Dijkstra over columns) for each free row.

    Dual updates touch scanned (assigned) columns only, so for rectangular
    problems columns that end up unassigned keep their initial price, which is
    what makes the final duals a valid optimality certificate when N < M.
    """
    n, m = cost.shape
    for free_row in free_rows:
        d = cost[free_row] - v
        pred = np.full(m, free_row, dtype=np.intp)
        done = np.zeros(m, dtype=bool)
        scanned = []
        while True:
            open_d = np.where(done, np.inf, d)
            j = int(open_d.argmin())
            if colsol[j] < 0:
                endofpath = j
                break
            mind = open_d[j]
            done[j] = True
            scanned.append(j)
            i = colsol[j]
            u1 = cost[i, j] - v[j] - mind
            relaxed = cost[i] - v - u1
            better = (~done) & (relaxed < d)
            d[better] = relaxed[better]
            pred[better] = i
        if scanned:
            sc = np.asarray(scanned)
            v[sc] += d[sc] - d[endofpath]
        j = endofpath
        while True:
            i = pred[j]
            colsol[j] = i
            rowsol[i], j = j, rowsol[i]
            if i == free_row:
                break


def _jv_square(cost, rowsol, colsol, v):
    """Canonical Jonker-Volgenant reduction phases for square matrices.

    Returns the rows still unassigned afterwards (handed to _augment).
    """
    n, m = cost.shape

    # column reduction, highest column index first
    col_min = cost.min(axis=0)
    col_argmin = cost.argmin(axis=0)
    matches = np.zeros(n, dtype=np.intp)
    for j in range(m - 1, -1, -1):
        v[j] = col_min[j]
        i = col_argmin[j]
        matches[i] += 1
        if matches[i] == 1:
            rowsol[i] = j
            colsol[j] = i

    # reduction transfer
    free_rows = []
    for i in range(n):
        if matches[i] == 0:
            free_rows.append(i)
        elif matches[i] == 1 and m > 1:
            j1 = rowsol[i]
            reduced = cost[i] - v
            reduced[j1] = np.inf
            v[j1] -= reduced.min()

    # augmenting row reduction, two passes
    for _ in range(2):
        pending = free_rows
        free_rows = []
        k = 0
        while k < len(pending):
            i = pending[k]
            k += 1
            reduced = cost[i] - v
            j1 = int(reduced.argmin())
            umin = reduced[j1]
            reduced[j1] = np.inf
            j2 = int(reduced.argmin())
            usubmin = reduced[j2]
            i0 = colsol[j1]
            if umin < usubmin:
                v[j1] -= usubmin - umin
            elif i0 >= 0 and np.isfinite(usubmin):
                j1 = j2
                i0 = colsol[j1]
            rowsol[i] = j1
            colsol[j1] = i
            if i0 >= 0:
                rowsol[i0] = -1
                if umin < usubmin:
                    k -= 1
                    pending[k] = i0
                else:
                    free_rows.append(i0)
    return free_rows


def jv_solve(cost: np.ndarray):
    """Jonker-Volgenant LAP on an N x M cost matrix, N <= M.

    Square inputs run the full JV pipeline (column reduction, reduction
    transfer, two augmenting-row-reduction passes, shortest augmenting
    paths). Rectangular inputs skip the reduction phases, whose positive
    column prices would invalidate rectangular duality, and instead warm-start
    from per-row minima before the augmenting-path stage.

    Returns (rowsol, u, v): optimal injective row-to-column assignment plus
    the dual pair certifying it.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    n, m = cost.shape
    rowsol = np.full(n, -1, dtype=np.intp)
    colsol = np.full(m, -1, dtype=np.intp)
    v = np.zeros(m, dtype=np.float64)

    if n == m:
        free_rows = _jv_square(cost, rowsol, colsol, v)
    else:
        free_rows = []
        for i in range(n):
            j = int(cost[i].argmin())
            if colsol[j] < 0:
                rowsol[i] = j
                colsol[j] = i
            else:
                free_rows.append(i)

    _augment(cost, free_rows, rowsol, colsol, v)
    u = cost[np.arange(n), rowsol] - v[rowsol]
    return rowsol, u, v


def tsne_step(p: np.ndarray, p_eff: np.ndarray, y: np.ndarray):
    """One exact t-SNE gradient evaluation with the Student-t (1 dof) kernel.

    ``p`` is the true joint affinity matrix (used for the KL value), ``p_eff``
    the possibly exaggerated one (used for the gradient). Returns
    (kl, qsum, grad) where qsum is the unnormalized Student-t mass (the Q
    normalizer, for the normalization invariant).
    """
    sq = (y * y).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (y @ y.T)
    np.maximum(d2, 0.0, out=d2)
    num = 1.0 / (1.0 + d2)
    np.fill_diagonal(num, 0.0)
    qsum = num.sum()
    q = num / qsum
    w = (p_eff - q) * num
    grad = 4.0 * (w.sum(axis=1)[:, None] * y - w @ y)
    mask = p > 0.0
    kl = float(np.sum(p[mask] * (np.log(p[mask]) - np.log(q[mask]))))
    return kl, float(qsum), grad

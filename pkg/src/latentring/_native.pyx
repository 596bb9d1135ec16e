# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: segment rasterizer, Jonker-Volgenant LAP, t-SNE step.

Same contracts as latentring._kernels_py; see that module for documentation.
"""

from libc.math cimport ceil, floor, log, sqrt

import numpy as np


def raster_segments(double[:, ::1] segs, double[:, ::1] img,
                    double x_origin=0.0, double y_origin=0.0):
    cdef Py_ssize_t h = img.shape[0]
    cdef Py_ssize_t w = img.shape[1]
    cdef Py_ssize_t nseg = segs.shape[0]
    cdef Py_ssize_t k, ix, iy, x0, x1, y0, y1
    cdef double ax, ay, bx, by, hw, amp
    cdef double mx, my, dx, dy, l2, px, py, t, qx, qy, ddx, ddy, dist, cov, c
    cdef double xmin, xmax, ymin, ymax

    for k in range(nseg):
        ax = segs[k, 0]; ay = segs[k, 1]
        bx = segs[k, 2]; by = segs[k, 3]
        hw = segs[k, 4]; amp = segs[k, 5]
        xmin = ax if ax < bx else bx
        xmax = ax if ax > bx else bx
        ymin = ay if ay < by else by
        ymax = ay if ay > by else by
        x0 = <Py_ssize_t>floor(xmin - hw - 0.5 - x_origin)
        x1 = <Py_ssize_t>ceil(xmax + hw - 0.5 - x_origin)
        y0 = <Py_ssize_t>floor(ymin - hw - 0.5 - y_origin)
        y1 = <Py_ssize_t>ceil(ymax + hw - 0.5 - y_origin)
        if x0 < 0: x0 = 0
        if y0 < 0: y0 = 0
        if x1 > w - 1: x1 = w - 1
        if y1 > h - 1: y1 = h - 1
        # midpoint-centered projection: bitwise symmetric under endpoint swap
        # and x negation (exact-mirror decoder property)
        mx = (ax + bx) / 2.0
        my = (ay + by) / 2.0
        dx = (bx - ax) / 2.0
        dy = (by - ay) / 2.0
        l2 = dx * dx + dy * dy
        for iy in range(y0, y1 + 1):
            py = (iy + 0.5) + y_origin
            for ix in range(x0, x1 + 1):
                px = (ix + 0.5) + x_origin
                if l2 > 0.0:
                    t = ((px - mx) * dx + (py - my) * dy) / l2
                    if t < -1.0: t = -1.0
                    elif t > 1.0: t = 1.0
                    qx = mx + t * dx
                    qy = my + t * dy
                else:
                    qx = mx
                    qy = my
                ddx = px - qx
                ddy = py - qy
                dist = sqrt(ddx * ddx + ddy * ddy)
                cov = hw - dist
                if cov > 0.0:
                    if cov > 1.0: cov = 1.0
                    c = amp * cov
                    if c > img[iy, ix]:
                        img[iy, ix] = c


cdef void _augment(double[:, ::1] cost, Py_ssize_t[::1] free_rows, Py_ssize_t nfree,
                   Py_ssize_t[::1] rowsol, Py_ssize_t[::1] colsol, double[::1] v,
                   double[::1] d, Py_ssize_t[::1] pred, unsigned char[::1] done,
                   Py_ssize_t[::1] scanned):
    cdef Py_ssize_t m = cost.shape[1]
    cdef Py_ssize_t f, free_row, i, j, j1, nscanned, endofpath
    cdef double mind, u1, h

    for f in range(nfree):
        free_row = free_rows[f]
        for j in range(m):
            d[j] = cost[free_row, j] - v[j]
            pred[j] = free_row
            done[j] = 0
        nscanned = 0
        endofpath = -1
        while True:
            mind = 1e308
            j1 = -1
            for j in range(m):
                if done[j] == 0 and d[j] < mind:
                    mind = d[j]
                    j1 = j
            if colsol[j1] < 0:
                endofpath = j1
                break
            done[j1] = 1
            scanned[nscanned] = j1
            nscanned += 1
            i = colsol[j1]
            u1 = cost[i, j1] - v[j1] - mind
            for j in range(m):
                if done[j] == 0:
                    h = cost[i, j] - v[j] - u1
                    if h < d[j]:
                        d[j] = h
                        pred[j] = i
        for i in range(nscanned):
            j = scanned[i]
            v[j] = v[j] + d[j] - d[endofpath]
        j = endofpath
        while True:
            i = pred[j]
            colsol[j] = i
            j1 = rowsol[i]
            rowsol[i] = j
            j = j1
            if i == free_row:
                break


def jv_solve(double[:, ::1] cost):
    cdef Py_ssize_t n = cost.shape[0]
    cdef Py_ssize_t m = cost.shape[1]

    rowsol_arr = np.full(n, -1, dtype=np.intp)
    colsol_arr = np.full(m, -1, dtype=np.intp)
    u_arr = np.zeros(n, dtype=np.float64)
    v_arr = np.zeros(m, dtype=np.float64)
    free_arr = np.zeros(n, dtype=np.intp)
    pending_arr = np.zeros(n, dtype=np.intp)
    matches_arr = np.zeros(n, dtype=np.intp)
    d_arr = np.zeros(m, dtype=np.float64)
    pred_arr = np.zeros(m, dtype=np.intp)
    done_arr = np.zeros(m, dtype=np.uint8)
    scanned_arr = np.zeros(m, dtype=np.intp)

    cdef Py_ssize_t[::1] rowsol = rowsol_arr
    cdef Py_ssize_t[::1] colsol = colsol_arr
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef Py_ssize_t[::1] free_rows = free_arr
    cdef Py_ssize_t[::1] pending = pending_arr
    cdef Py_ssize_t[::1] matches = matches_arr

    cdef Py_ssize_t i, j, k, i0, j1, j2, nfree, npending, sweep
    cdef double h, umin, usubmin

    if n == m:
        # column reduction, highest column first
        for j in range(m - 1, -1, -1):
            h = cost[0, j]
            i0 = 0
            for i in range(1, n):
                if cost[i, j] < h:
                    h = cost[i, j]
                    i0 = i
            v[j] = h
            matches[i0] += 1
            if matches[i0] == 1:
                rowsol[i0] = j
                colsol[j] = i0

        # reduction transfer
        nfree = 0
        for i in range(n):
            if matches[i] == 0:
                free_rows[nfree] = i
                nfree += 1
            elif matches[i] == 1 and m > 1:
                j1 = rowsol[i]
                umin = 1e308
                for j in range(m):
                    if j != j1:
                        h = cost[i, j] - v[j]
                        if h < umin:
                            umin = h
                v[j1] = v[j1] - umin

        # augmenting row reduction, two passes
        for sweep in range(2):
            npending = nfree
            for k in range(nfree):
                pending[k] = free_rows[k]
            nfree = 0
            k = 0
            while k < npending:
                i = pending[k]
                k += 1
                umin = cost[i, 0] - v[0]
                j1 = 0
                usubmin = 1e308
                j2 = -1
                for j in range(1, m):
                    h = cost[i, j] - v[j]
                    if h < usubmin:
                        if h >= umin:
                            usubmin = h
                            j2 = j
                        else:
                            usubmin = umin
                            j2 = j1
                            umin = h
                            j1 = j
                i0 = colsol[j1]
                if umin < usubmin:
                    v[j1] = v[j1] - (usubmin - umin)
                elif i0 >= 0 and j2 >= 0:
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
                        free_rows[nfree] = i0
                        nfree += 1
    else:
        # rectangular: row-minimum warm start keeps unassigned column prices
        # at zero, preserving rectangular duality
        nfree = 0
        for i in range(n):
            h = cost[i, 0]
            j1 = 0
            for j in range(1, m):
                if cost[i, j] < h:
                    h = cost[i, j]
                    j1 = j
            if colsol[j1] < 0:
                rowsol[i] = j1
                colsol[j1] = i
            else:
                free_rows[nfree] = i
                nfree += 1

    _augment(cost, free_rows, nfree, rowsol, colsol, v,
             d_arr, pred_arr, done_arr, scanned_arr)

    for i in range(n):
        u[i] = cost[i, rowsol[i]] - v[rowsol[i]]
    return rowsol_arr, u_arr, v_arr


def tsne_step(double[:, ::1] p, double[:, ::1] p_eff, double[:, ::1] y):
    cdef Py_ssize_t n = y.shape[0]
    num_arr = np.empty((n, n), dtype=np.float64)
    grad_arr = np.zeros((n, 2), dtype=np.float64)
    cdef double[:, ::1] num = num_arr
    cdef double[:, ::1] grad = grad_arr

    cdef Py_ssize_t i, j
    cdef double dx, dy, d2, qsum, wij, q, kl, gx, gy, yi0, yi1

    qsum = 0.0
    for i in range(n):
        num[i, i] = 0.0
        for j in range(i + 1, n):
            dx = y[i, 0] - y[j, 0]
            dy = y[i, 1] - y[j, 1]
            d2 = dx * dx + dy * dy
            wij = 1.0 / (1.0 + d2)
            num[i, j] = wij
            num[j, i] = wij
            qsum += 2.0 * wij

    kl = 0.0
    for i in range(n):
        yi0 = y[i, 0]
        yi1 = y[i, 1]
        gx = 0.0
        gy = 0.0
        for j in range(n):
            if j == i:
                continue
            q = num[i, j] / qsum
            wij = (p_eff[i, j] - q) * num[i, j]
            gx += wij * (yi0 - y[j, 0])
            gy += wij * (yi1 - y[j, 1])
            if p[i, j] > 0.0:
                kl += p[i, j] * (log(p[i, j]) - log(q))
        grad[i, 0] = 4.0 * gx
        grad[i, 1] = 4.0 * gy
    return kl, qsum, grad_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled curvature kernels; same contract as ``emgr._kernels_py``."""

import numpy as np


def connection(const double[:, :, ::1] ginv, const double[:, :, :, ::1] dg,
               const double[:, :, ::1] h, const double[:, :, :, ::1] dh,
               const double[:, :, :, :, ::1] d2h, const double[:, :, :, ::1] gbar,
               const double[:, :, :, :, ::1] dgbar):
    cdef Py_ssize_t npts = ginv.shape[0]
    d_out = np.zeros((npts, 4, 4, 4))
    dd_out = np.zeros((npts, 4, 4, 4, 4))
    cdef double[:, :, :, ::1] d = d_out
    cdef double[:, :, :, :, ::1] dd = dd_out
    cdef double e[4][4][4]
    cdef double de[4][4][4][4]
    cdef double dginv[4][4][4]
    cdef double tmp[4][4]
    cdef double acc, acc2
    cdef Py_ssize_t n, k, l, s, m, q, p, a, b

    for n in range(npts):
        for s in range(4):
            for m in range(4):
                for q in range(m, 4):
                    acc = 0.0
                    for p in range(4):
                        acc += h[n, s, p] * gbar[n, p, m, q]
                    acc = dh[n, m, s, q] + dh[n, q, s, m] - dh[n, s, m, q] - 2.0 * acc
                    e[s][m][q] = acc
                    e[s][q][m] = acc
                    for k in range(4):
                        acc2 = 0.0
                        for p in range(4):
                            acc2 += dh[n, k, s, p] * gbar[n, p, m, q] + h[n, s, p] * dgbar[n, k, p, m, q]
                        acc2 = (d2h[n, k, m, s, q] + d2h[n, k, q, s, m]
                                - d2h[n, k, s, m, q] - 2.0 * acc2)
                        de[k][s][m][q] = acc2
                        de[k][s][q][m] = acc2
        # d_k g^{ls} = -g^{la} d_k g_{ab} g^{bs}
        for k in range(4):
            for l in range(4):
                for b in range(4):
                    acc = 0.0
                    for a in range(4):
                        acc += ginv[n, l, a] * dg[n, k, a, b]
                    tmp[l][b] = acc
            for l in range(4):
                for s in range(4):
                    acc = 0.0
                    for b in range(4):
                        acc += tmp[l][b] * ginv[n, b, s]
                    dginv[k][l][s] = -acc
        for l in range(4):
            for m in range(4):
                for q in range(m, 4):
                    acc = 0.0
                    for s in range(4):
                        acc += ginv[n, l, s] * e[s][m][q]
                    d[n, l, m, q] = 0.5 * acc
                    d[n, l, q, m] = 0.5 * acc
                    for k in range(4):
                        acc = 0.0
                        for s in range(4):
                            acc += dginv[k][l][s] * e[s][m][q] + ginv[n, l, s] * de[k][s][m][q]
                        dd[n, k, l, m, q] = 0.5 * acc
                        dd[n, k, l, q, m] = 0.5 * acc
    return d_out, dd_out


def riemann(const double[:, :, :, ::1] gbar, const double[:, :, :, ::1] d,
            const double[:, :, :, :, ::1] dd):
    cdef Py_ssize_t npts = d.shape[0]
    out = np.zeros((npts, 4, 4, 4, 4))
    cdef double[:, :, :, :, ::1] rie = out
    cdef double a[4][4][4][4]
    cdef double acc
    cdef Py_ssize_t n, r, s, m, v, k

    for n in range(npts):
        for r in range(4):
            for s in range(4):
                for m in range(4):
                    for v in range(4):
                        acc = dd[n, m, r, v, s]
                        for k in range(4):
                            acc += ((gbar[n, r, m, k] + d[n, r, m, k]) * d[n, k, v, s]
                                    - gbar[n, k, m, s] * d[n, r, v, k])
                        a[r][s][m][v] = acc
        for r in range(4):
            for s in range(4):
                for m in range(4):
                    for v in range(4):
                        rie[n, r, s, m, v] = a[r][s][m][v] - a[r][s][v][m]
    return out

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; semantics match ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def sample_bilinear(double[:, :, ::1] img, u, v):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], nc = img.shape[2]
    ua = np.ascontiguousarray(u, dtype=np.float64)
    va = np.ascontiguousarray(v, dtype=np.float64)
    shape = ua.shape
    cdef double[::1] uf = ua.reshape(-1)
    cdef double[::1] vf = va.reshape(-1)
    cdef Py_ssize_t n = uf.shape[0], i, ch
    out = np.empty((n, nc), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double x, y, fu, fv, a, b
    cdef long u0, v0, c0, c1, r0, r1
    with nogil:
        for i in range(n):
            x = uf[i]
            y = vf[i]
            u0 = <long>floor(x)
            v0 = <long>floor(y)
            fu = x - u0
            fv = y - v0
            c0 = u0 % w
            if c0 < 0:
                c0 += w
            c1 = (c0 + 1) % w
            r0 = v0
            r1 = v0 + 1
            if r0 < 0:
                r0 = 0
            elif r0 > h - 1:
                r0 = h - 1
            if r1 < 0:
                r1 = 0
            elif r1 > h - 1:
                r1 = h - 1
            for ch in range(nc):
                a = img[r0, c0, ch] * (1.0 - fu) + img[r0, c1, ch] * fu
                b = img[r1, c0, ch] * (1.0 - fu) + img[r1, c1, ch] * fu
                o[i, ch] = a * (1.0 - fv) + b * fv
    return out.reshape(shape + (nc,))


def sample_nearest(double[:, :, ::1] img, u, v):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], nc = img.shape[2]
    ua = np.ascontiguousarray(u, dtype=np.float64)
    va = np.ascontiguousarray(v, dtype=np.float64)
    shape = ua.shape
    cdef double[::1] uf = ua.reshape(-1)
    cdef double[::1] vf = va.reshape(-1)
    cdef Py_ssize_t n = uf.shape[0], i, ch
    out = np.empty((n, nc), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef long c, r
    with nogil:
        for i in range(n):
            c = <long>floor(uf[i] + 0.5) % w
            if c < 0:
                c += w
            r = <long>floor(vf[i] + 0.5)
            if r < 0:
                r = 0
            elif r > h - 1:
                r = h - 1
            for ch in range(nc):
                o[i, ch] = img[r, c, ch]
    return out.reshape(shape + (nc,))


cdef inline Py_ssize_t _refl(Py_ssize_t i, Py_ssize_t n) nogil:
    if i < 0:
        return -i - 1
    if i >= n:
        return 2 * n - i - 1
    return i


def correlate3x3(img, k):
    a = np.ascontiguousarray(img, dtype=np.float64)
    cdef double[:, ::1] src = a
    cdef double[:, ::1] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], i, j, di, dj
    out = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double s, kv
    cdef bint edge
    with nogil:
        for i in range(h):
            edge = i == 0 or i == h - 1
            for j in range(w):
                s = 0.0
                if edge or j == 0 or j == w - 1:
                    for di in range(3):
                        for dj in range(3):
                            if kk[di, dj] != 0.0:
                                s = s + kk[di, dj] * src[_refl(i + di - 1, h), _refl(j + dj - 1, w)]
                else:
                    # interior: no reflection needed; same term order as above
                    for di in range(3):
                        for dj in range(3):
                            kv = kk[di, dj]
                            if kv != 0.0:
                                s = s + kv * src[i + di - 1, j + dj - 1]
                o[i, j] = s
    return out


def nearest_centroid(x, c):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], k = cv.shape[0], d = xv.shape[1], i, j, m
    lab = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    cdef long long[::1] lv = lab
    cdef double[::1] dv = dist
    cdef double best, s, t
    cdef long long bj
    with nogil:
        for i in range(n):
            best = -1.0
            bj = 0
            for j in range(k):
                s = 0.0
                for m in range(d):
                    t = xv[i, m] - cv[j, m]
                    s = s + t * t
                if best < 0.0 or s < best:
                    best = s
                    bj = j
            lv[i] = bj
            dv[i] = best
    return lab, dist

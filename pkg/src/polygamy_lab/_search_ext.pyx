# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled roof search kernel.

Same algorithm as ``_search_py``; the whole restart runs without the GIL so
restarts can share a thread pool.
"""

import numpy as np

from libc.math cimport sqrt, log2, fabs

cdef enum:
    KIND_CONCURRENCE = 0
    KIND_NEGATIVITY = 1
    KIND_ENTROPY = 2
    KIND_ANTILINEAR = 3

cdef double DROP_TOL = 1e-12
cdef double GROW = 1.5
cdef double SHRINK = 0.9
cdef double MAX_STEP = 1.0


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void mgs(double complex* q, Py_ssize_t k, Py_ssize_t r) nogil:
    # in place on a row-major k x r matrix, column by column
    cdef Py_ssize_t i, j, a
    cdef double complex dot
    cdef double nrm
    for j in range(r):
        for i in range(j):
            dot = 0
            for a in range(k):
                dot = dot + q[a * r + i].conjugate() * q[a * r + j]
            for a in range(k):
                q[a * r + j] = q[a * r + j] - dot * q[a * r + i]
        nrm = 0
        for a in range(k):
            nrm += cabs2(q[a * r + j])
        nrm = sqrt(nrm)
        for a in range(k):
            q[a * r + j] = q[a * r + j] / nrm


cdef void jacobi_eigvals(double* s, Py_ssize_t n, double* out) nogil:
    # cyclic Jacobi on a real symmetric n x n matrix (destroyed)
    cdef Py_ssize_t p, q, i, sweep
    cdef double off, app, aqq, apq, theta, t, c, sn, aip, aiq
    for sweep in range(100):
        off = 0
        for p in range(n):
            for q in range(p + 1, n):
                off += s[p * n + q] * s[p * n + q]
        if off < 1e-30:
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = s[p * n + q]
                if fabs(apq) < 1e-300:
                    continue
                app = s[p * n + p]
                aqq = s[q * n + q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                sn = t * c
                for i in range(n):
                    aip = s[i * n + p]
                    aiq = s[i * n + q]
                    s[i * n + p] = c * aip - sn * aiq
                    s[i * n + q] = sn * aip + c * aiq
                for i in range(n):
                    aip = s[p * n + i]
                    aiq = s[q * n + i]
                    s[p * n + i] = c * aip - sn * aiq
                    s[q * n + i] = sn * aip + c * aiq
    for i in range(n):
        out[i] = s[i * n + i]


cdef void gram_spectrum(double complex* w, Py_ssize_t da, Py_ssize_t db,
                        double* scratch, double* mu) nogil:
    # eigenvalues of the smaller Gram matrix of the da x db block w,
    # via the real 2n x 2n embedding [[Re, -Im], [Im, Re]] (each value twice)
    cdef Py_ssize_t n, m, i, j, x
    cdef double complex g
    cdef double a, c, h, disc, tmp
    cdef double* ev
    if da <= db:
        n = da
    else:
        n = db
    if n == 2:
        # closed form; the small root is det / large root, with the
        # determinant as a sum of squared 2x2 minors (no cancellation)
        a = 0; c = 0; g = 0; tmp = 0
        if da <= db:
            for x in range(db):
                a += cabs2(w[x])
                c += cabs2(w[db + x])
                g = g + w[x] * w[db + x].conjugate()
            for i in range(db):
                for j in range(i + 1, db):
                    tmp += cabs2(w[i] * w[db + j] - w[j] * w[db + i])
        else:
            for x in range(da):
                a += cabs2(w[x * db])
                c += cabs2(w[x * db + 1])
                g = g + w[x * db].conjugate() * w[x * db + 1]
            for i in range(da):
                for j in range(i + 1, da):
                    tmp += cabs2(w[i * db] * w[j * db + 1] - w[i * db + 1] * w[j * db])
        h = 0.5 * (a + c)
        disc = sqrt(0.25 * (a - c) * (a - c) + cabs2(g))
        mu[0] = h + disc
        mu[1] = tmp / mu[0] if mu[0] > 0 else 0.0
        return
    m = 2 * n
    for i in range(n):
        for j in range(n):
            g = 0
            if da <= db:
                for x in range(db):
                    g = g + w[i * db + x] * w[j * db + x].conjugate()
            else:
                for x in range(da):
                    g = g + w[x * db + i].conjugate() * w[x * db + j]
            scratch[i * m + j] = g.real
            scratch[(i + n) * m + (j + n)] = g.real
            scratch[(i + n) * m + j] = g.imag
            scratch[i * m + (j + n)] = -g.imag
    jacobi_eigvals(scratch, m, scratch + m * m)
    # pair up the doubled spectrum: sort then take every other value
    ev = scratch + m * m
    for i in range(1, m):
        tmp = ev[i]
        j = i - 1
        while j >= 0 and ev[j] < tmp:
            ev[j + 1] = ev[j]
            j -= 1
        ev[j + 1] = tmp
    for i in range(n):
        mu[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1])


cdef double member_value(double complex* w, double p, Py_ssize_t da, Py_ssize_t db,
                         int kind, double complex* op, double* scratch, double* mu) nogil:
    cdef Py_ssize_t i, j, k, l, a, b, d, n
    cdef double acc, x
    cdef double complex z
    d = da * db
    if kind == KIND_CONCURRENCE:
        acc = 0
        for i in range(da):
            for j in range(i + 1, da):
                for k in range(db):
                    for l in range(k + 1, db):
                        acc += cabs2(w[i * db + k] * w[j * db + l] - w[i * db + l] * w[j * db + k])
        return 2.0 * sqrt(acc) / p
    if kind == KIND_ANTILINEAR:
        z = 0
        for a in range(d):
            for b in range(d):
                z = z + w[a] * op[a * d + b] * w[b]
        return sqrt(cabs2(z)) / p
    gram_spectrum(w, da, db, scratch, mu)
    n = da if da <= db else db
    acc = 0
    if kind == KIND_NEGATIVITY:
        for i in range(n):
            x = mu[i] / p
            if x > 0:
                acc += sqrt(x)
        acc = acc * acc - 1.0
    else:
        for i in range(n):
            x = mu[i] / p
            if x > 1e-300:
                acc -= x * log2(x)
    if acc < 0:
        acc = 0
    return acc


cdef double average(double complex* basis, double complex* v, Py_ssize_t k, Py_ssize_t r,
                    Py_ssize_t da, Py_ssize_t db, int kind, double complex* op,
                    double complex* w, double* scratch, double* mu) nogil:
    cdef Py_ssize_t i, j, x, d
    cdef double p, total
    cdef double complex c
    d = da * db
    total = 0
    for i in range(k):
        for x in range(d):
            w[x] = 0
        for j in range(r):
            c = v[i * r + j]
            for x in range(d):
                w[x] = w[x] + c * basis[j * d + x]
        p = 0
        for x in range(d):
            p += cabs2(w[x])
        if p <= DROP_TOL:
            continue
        total += p * member_value(w, p, da, db, kind, op, scratch, mu)
    return total


def ensemble_average(double complex[:, ::1] basis, double complex[:, ::1] v,
                     Py_ssize_t dim_a, Py_ssize_t dim_b, int kind, op=None):
    cdef double complex[:, ::1] opv = _op_view(op, dim_a * dim_b)
    cdef Py_ssize_t n = dim_a if dim_a <= dim_b else dim_b
    w = np.empty(dim_a * dim_b, dtype=np.complex128)
    scratch = np.empty(4 * n * n + 2 * n + 1, dtype=np.float64)
    mu = np.empty(n, dtype=np.float64)
    cdef double complex[::1] wv = w
    cdef double[::1] sv = scratch
    cdef double[::1] mv = mu
    return average(&basis[0, 0], &v[0, 0], v.shape[0], v.shape[1], dim_a, dim_b, kind,
                   &opv[0, 0], &wv[0], &sv[0], &mv[0])


def _op_view(op, Py_ssize_t d):
    if op is None:
        return np.zeros((1, 1), dtype=np.complex128)
    return np.ascontiguousarray(op, dtype=np.complex128).reshape(d, d)


def local_search(double complex[:, ::1] basis, v0, double complex[:, :, ::1] noise,
                 Py_ssize_t dim_a, Py_ssize_t dim_b, int kind, op, double sign,
                 double step0, double step_tol):
    cdef double complex[:, ::1] opv = _op_view(op, dim_a * dim_b)
    cdef Py_ssize_t k = noise.shape[1]
    cdef Py_ssize_t r = noise.shape[2]
    cdef Py_ssize_t iters = noise.shape[0]
    cdef Py_ssize_t n = dim_a if dim_a <= dim_b else dim_b
    cdef Py_ssize_t t, x, it = 0
    cdef bint converged = False
    cdef double f, fc, step = step0

    v = np.array(v0, dtype=np.complex128, order="C", copy=True)
    cand = np.empty_like(v)
    w = np.empty(dim_a * dim_b, dtype=np.complex128)
    scratch = np.empty(4 * n * n + 2 * n + 1, dtype=np.float64)
    mu = np.empty(n, dtype=np.float64)
    cdef double complex[:, ::1] vv = v
    cdef double complex[:, ::1] cv = cand
    cdef double complex[::1] wv = w
    cdef double[::1] sv = scratch
    cdef double[::1] mv = mu
    cdef double complex* bp = &basis[0, 0]
    cdef double complex* op_p = &opv[0, 0]

    with nogil:
        mgs(&vv[0, 0], k, r)
        f = average(bp, &vv[0, 0], k, r, dim_a, dim_b, kind, op_p, &wv[0], &sv[0], &mv[0])
        for t in range(iters):
            it = t + 1
            for x in range(k * r):
                (&cv[0, 0])[x] = (&vv[0, 0])[x] + step * (&noise[t, 0, 0])[x]
            mgs(&cv[0, 0], k, r)
            fc = average(bp, &cv[0, 0], k, r, dim_a, dim_b, kind, op_p, &wv[0], &sv[0], &mv[0])
            if sign * (fc - f) > 0:
                for x in range(k * r):
                    (&vv[0, 0])[x] = (&cv[0, 0])[x]
                f = fc
                step = step * GROW
                if step > MAX_STEP:
                    step = MAX_STEP
            else:
                step = step * SHRINK
            if step < step_tol:
                converged = True
                break
    return v, f, it, bool(converged)

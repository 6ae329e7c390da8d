# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the numeric hot loops.

Same contracts as pcdissect._kernels_py.  Loops run in a fixed order with
float64 accumulation, so results are reproducible run to run.
"""

from libc.math cimport exp, log

import numpy as np

cimport numpy as cnp

cnp.import_array()


def logreg_loss_grad(double[:, ::1] xb, cnp.int64_t[::1] y, double[:, ::1] w):
    cdef Py_ssize_t n = xb.shape[0]
    cdef Py_ssize_t k = xb.shape[1]
    cdef Py_ssize_t c = w.shape[0]
    grad_arr = np.zeros((c, k), dtype=np.float64)
    logits_arr = np.empty(c, dtype=np.float64)
    cdef double[:, ::1] grad = grad_arr
    cdef double[::1] logits = logits_arr
    cdef double loss = 0.0, m, s, lse, p
    cdef Py_ssize_t i, j, t

    for i in range(n):
        m = -1e308
        for j in range(c):
            s = 0.0
            for t in range(k):
                s += w[j, t] * xb[i, t]
            logits[j] = s
            if s > m:
                m = s
        s = 0.0
        for j in range(c):
            s += exp(logits[j] - m)
        lse = m + log(s)
        loss += lse - logits[y[i]]
        for j in range(c):
            p = exp(logits[j] - lse)
            if j == y[i]:
                p -= 1.0
            for t in range(k):
                grad[j, t] += p * xb[i, t]

    grad_arr /= n
    return loss / n, grad_arr


def logreg_loss(double[:, ::1] xb, cnp.int64_t[::1] y, double[:, ::1] w):
    cdef Py_ssize_t n = xb.shape[0]
    cdef Py_ssize_t k = xb.shape[1]
    cdef Py_ssize_t c = w.shape[0]
    logits_arr = np.empty(c, dtype=np.float64)
    cdef double[::1] logits = logits_arr
    cdef double loss = 0.0, m, s
    cdef Py_ssize_t i, j, t

    for i in range(n):
        m = -1e308
        for j in range(c):
            s = 0.0
            for t in range(k):
                s += w[j, t] * xb[i, t]
            logits[j] = s
            if s > m:
                m = s
        s = 0.0
        for j in range(c):
            s += exp(logits[j] - m)
        loss += m + log(s) - logits[y[i]]

    return loss / n


def remove_projections(double[:, ::1] x, const double[:, ::1] u):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    cdef Py_ssize_t top = u.shape[1]
    if top == 0:
        return np.asarray(x)
    coef_arr = np.empty(top, dtype=np.float64)
    cdef double[::1] coef = coef_arr
    cdef double s
    cdef Py_ssize_t i, j, t

    for i in range(n):
        for j in range(top):
            s = 0.0
            for t in range(d):
                s += x[i, t] * u[t, j]
            coef[j] = s
        for j in range(top):
            s = coef[j]
            for t in range(d):
                x[i, t] -= s * u[t, j]

    return np.asarray(x)

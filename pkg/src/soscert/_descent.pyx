# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coordinate-descent kernel for the root-form search.

Twin of soscert._descent_py.descend_batch; see that module for the shared
algorithm contract.  Keep the floating-point operation order identical
(square each factor before multiplying into the running product, accumulate
over k in increasing order) and build with -ffp-contract=off, so both
backends return bit-identical results.
"""

import numpy as np


cdef double _objective(double[::1] r, int t, int n, double[::1] weights) noexcept nogil:
    cdef double acc = 0.0
    cdef double p, u
    cdef int k, i
    for k in range(1, n + 1):
        p = weights[k]
        for i in range(t):
            u = (k - r[i]) / r[i]
            p = p * (u * u)
        acc = acc + p
    return acc


def descend_batch(starts, int n, weights, double init_step, double shrink,
                  double tol, int max_sweeps):
    """Coordinate descent on [1, n]^t from each start row; greedy, shrinking steps.

    Returns (roots, values) with one row/value per restart.
    """
    r_arr = np.array(starts, dtype=np.float64, copy=True)
    w_arr = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t batch = r_arr.shape[0]
    cdef int t = r_arr.shape[1]
    values = np.empty(batch, dtype=np.float64)
    cdef double[::1] wv = w_arr
    cdef double[:, ::1] r
    cdef double[::1] out = values
    cdef double hi = <double> n
    cdef double f, fc, step, old, cand
    cdef bint improved
    cdef int sweep, i, sgn
    cdef Py_ssize_t b

    if t == 0:
        total = 0.0
        for k in range(1, n + 1):
            total = total + float(w_arr[k])
        values.fill(total)
        return r_arr, values

    r = r_arr
    with nogil:
        for b in range(batch):
            f = _objective(r[b], t, n, wv)
            step = init_step
            for sweep in range(max_sweeps):
                if step < tol:
                    break
                improved = 0
                for i in range(t):
                    for sgn in range(2):
                        if sgn == 0:
                            cand = r[b, i] + step
                        else:
                            cand = r[b, i] - step
                        if cand < 1.0:
                            cand = 1.0
                        if cand > hi:
                            cand = hi
                        old = r[b, i]
                        r[b, i] = cand
                        fc = _objective(r[b], t, n, wv)
                        if fc < f:
                            f = fc
                            improved = 1
                        else:
                            r[b, i] = old
                if not improved:
                    step = step * shrink
            out[b] = f
    return r_arr, values

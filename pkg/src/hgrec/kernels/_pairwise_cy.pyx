# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise similarity kernel (see _pairwise_py for the semantics)."""

import numpy as np


def mean_similarity_row(t_tokens, t_off, tokens, file_off, set_off, out=None):
    """Mean pairwise prefix similarity of one file set against many."""
    cdef const int[::1] tt = np.ascontiguousarray(t_tokens, dtype=np.int32)
    cdef const long long[::1] to = np.ascontiguousarray(t_off, dtype=np.int64)
    cdef const int[::1] ct = np.ascontiguousarray(tokens, dtype=np.int32)
    cdef const long long[::1] fo = np.ascontiguousarray(file_off, dtype=np.int64)
    cdef const long long[::1] so = np.ascontiguousarray(set_off, dtype=np.int64)

    cdef Py_ssize_t n_sets = so.shape[0] - 1
    if out is None:
        out = np.empty(n_sets, dtype=np.float64)
    cdef double[::1] res = out

    cdef Py_ssize_t n_t = to.shape[0] - 1
    cdef Py_ssize_t j, a, fb, f_lo, f_hi
    cdef Py_ssize_t a0, b0, la, lb, limit, lcp
    cdef double total

    with nogil:
        for j in range(n_sets):
            f_lo = <Py_ssize_t> so[j]
            f_hi = <Py_ssize_t> so[j + 1]
            total = 0.0
            for a in range(n_t):
                a0 = <Py_ssize_t> to[a]
                la = <Py_ssize_t> to[a + 1] - a0
                for fb in range(f_lo, f_hi):
                    b0 = <Py_ssize_t> fo[fb]
                    lb = <Py_ssize_t> fo[fb + 1] - b0
                    limit = la if la < lb else lb
                    lcp = 0
                    while lcp < limit and tt[a0 + lcp] == ct[b0 + lcp]:
                        lcp += 1
                    total += lcp / <double> (la if la > lb else lb)
            res[j] = total / <double> (n_t * (f_hi - f_lo))
    return out

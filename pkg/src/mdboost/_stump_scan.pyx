# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stump scan; semantics identical to _stump_scan_py.scan.

Prefix sums accumulate in the same sequential order as numpy's cumsum, so
results are bit-identical to the fallback (no -ffast-math, no reordering).
"""

import numpy as np

cimport numpy as cnp

BACKEND = "cython"


def scan(const cnp.intp_t[:, ::1] order,
         const double[:, ::1] values,
         const double[::1] s):
    """Best (edge, feature, pos, polarity); see _stump_scan_py.scan."""
    cdef Py_ssize_t d = order.shape[0]
    cdef Py_ssize_t m = order.shape[1]
    cdef Py_ssize_t f, k
    cdef double acc, e
    cdef double best_edge = -np.inf
    cdef Py_ssize_t best_f = 0, best_pos = -1
    cdef int best_pol = 1

    # shared total in example order (matches np.cumsum(s)[-1] bitwise), so
    # sentinel candidates of different features tie exactly
    cdef double total = 0.0
    for k in range(m):
        total += s[k]

    for f in range(d):
        # below-min sentinel: every example on the +polarity side
        if total > best_edge:
            best_edge = total; best_f = f; best_pos = -1; best_pol = 1
        if -total > best_edge:
            best_edge = -total; best_f = f; best_pos = -1; best_pol = -1

        acc = 0.0
        for k in range(m - 1):
            acc += s[order[f, k]]
            if values[f, k] != values[f, k + 1]:
                e = total - 2.0 * acc
                if e > best_edge:
                    best_edge = e; best_f = f; best_pos = k; best_pol = 1
                if -e > best_edge:
                    best_edge = -e; best_f = f; best_pos = k; best_pol = -1

        # above-max sentinel: every example on the -polarity side
        if -total > best_edge:
            best_edge = -total; best_f = f; best_pos = m - 1; best_pol = 1
        if total > best_edge:
            best_edge = total; best_f = f; best_pos = m - 1; best_pol = -1

    return float(best_edge), int(best_f), int(best_pos), int(best_pol)

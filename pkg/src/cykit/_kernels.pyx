# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coloring-sum kernel for pointed ribbon data.

For colorings c in G^n of the components of a framed link with linking
matrix q, the exponent

    e(c) = sum_i q[i,i] t[c_i] + sum_{i<j} q[i,j] b[c_i, c_j]   (mod M)

is tallied into a histogram of length M.  Colorings are enumerated by an
odometer; the fastest digit is swept with a maintained
cross-term table, so the amortized cost per coloring is O(1 + n/m).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def coloring_histogram(q, t, b, long long modulus):
    cdef long long[:, ::1] qv = np.ascontiguousarray(q, dtype=np.int64)
    cdef long long[::1] tv = np.ascontiguousarray(t, dtype=np.int64) % modulus
    cdef long long[:, ::1] bv = np.ascontiguousarray(b, dtype=np.int64) % modulus
    cdef Py_ssize_t n = qv.shape[0]
    cdef Py_ssize_t m = tv.shape[0]
    hist_arr = np.zeros(modulus, dtype=np.int64)
    cdef long long[::1] hist = hist_arr
    if n == 0:
        hist[0] = 1
        return hist_arr
    if m == 0:
        return hist_arr

    # reduce the matrix modulo M so all running quantities stay small
    cdef long long[:, ::1] qm = np.ascontiguousarray(np.asarray(q, dtype=np.int64) % modulus)
    cdef long long[::1] c = np.zeros(n, dtype=np.int64)
    # rest: terms not involving digit 0; w[k]: digit-0 cross terms when c[0] = k
    cdef long long[::1] w = np.zeros(m, dtype=np.int64)
    cdef long long[::1] t0 = np.zeros(m, dtype=np.int64)
    cdef long long rest = 0
    cdef Py_ssize_t i, j, k
    cdef long long old, new, delta, qj

    for i in range(1, n):
        rest += qm[i, i] * tv[0]
        for j in range(i + 1, n):
            rest += qm[i, j] * bv[0, 0]
    rest %= modulus
    for k in range(m):
        t0[k] = (qm[0, 0] * tv[k]) % modulus
        for j in range(1, n):
            w[k] += qm[0, j] * bv[0, k]
        w[k] %= modulus

    while True:
        for k in range(m):
            hist[(rest + t0[k] + w[k]) % modulus] += 1

        # odometer over digits 1..n-1
        j = 1
        while j < n:
            old = c[j]
            new = old + 1
            if new == m:
                new = 0
            delta = qm[j, j] * (tv[new] - tv[old])
            for i in range(1, n):
                if i != j:
                    delta += qm[i, j] * (bv[c[i], new] - bv[c[i], old])
            rest = (rest + delta) % modulus
            if rest < 0:
                rest += modulus
            qj = qm[0, j]
            if qj != 0:
                for k in range(m):
                    w[k] = (w[k] + qj * (bv[new, k] - bv[old, k])) % modulus
                    if w[k] < 0:
                        w[k] += modulus
            c[j] = new
            if new != 0:
                break
            j += 1
        if j == n:
            break
    return hist_arr

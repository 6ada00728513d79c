# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot kernels.

Semantics (operation kinds and their order) mirror ``_pure`` exactly so the
two backends are interchangeable bit for bit; see tests/test_kernels.py.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()


def gibbs_sweeps(
    cnp.int32_t[::1] z,
    cnp.int32_t[::1] docs,
    cnp.int32_t[::1] terms,
    cnp.int32_t[:, ::1] ndk,
    cnp.float64_t[:, ::1] nkw,
    cnp.float64_t[::1] nk,
    double alpha,
    double beta,
    cnp.float64_t[:, ::1] uniforms,
):
    """Collapsed Gibbs sampling sweeps over one batch of tokens (in place)."""
    cdef Py_ssize_t n_tokens = z.shape[0]
    cdef Py_ssize_t n_sweeps = uniforms.shape[0]
    cdef Py_ssize_t n_topics = nkw.shape[0]
    cdef double beta_v = beta * nkw.shape[1]
    cdef Py_ssize_t s, i, k
    cdef int d, w, k_old, k_new
    cdef double total, u, p
    cdef double* cum = <double*> malloc(n_topics * sizeof(double))
    if cum == NULL:
        raise MemoryError()
    try:
        for s in range(n_sweeps):
            for i in range(n_tokens):
                d = docs[i]
                w = terms[i]
                k_old = z[i]
                ndk[d, k_old] -= 1
                nkw[k_old, w] -= 1.0
                nk[k_old] -= 1.0
                total = 0.0
                for k in range(n_topics):
                    p = (ndk[d, k] + alpha) * (nkw[k, w] + beta) / (nk[k] + beta_v)
                    total += p
                    cum[k] = total
                u = uniforms[s, i] * total
                k_new = n_topics - 1
                for k in range(n_topics):
                    if cum[k] > u:
                        k_new = k
                        break
                z[i] = k_new
                ndk[d, k_new] += 1
                nkw[k_new, w] += 1.0
                nk[k_new] += 1.0
    finally:
        free(cum)


def knn_kth_cosine(
    cnp.int32_t[::1] q_indptr,
    cnp.int32_t[::1] q_indices,
    cnp.float64_t[::1] q_wdata,
    cnp.float64_t[::1] q_norms,
    cnp.int32_t[::1] h_indptr,
    cnp.int32_t[::1] h_rows,
    cnp.float64_t[::1] h_wdata,
    cnp.float64_t[::1] h_norms,
    int n_hist,
    int vocab_size,
    int k,
):
    """Cosine similarity to the k-th nearest history row, per query row.

    The history is given as CSC (term -> entries); per query the dot products
    accumulate in ascending term order, matching scipy's sparse matmul.
    """
    cdef Py_ssize_t nq = q_indptr.shape[0] - 1
    out_arr = np.zeros(nq, dtype=np.float64)
    cdef cnp.float64_t[::1] out = out_arr
    if n_hist == 0:
        return out_arr

    cdef int k_eff = k if k < n_hist else n_hist
    cdef double* acc = <double*> malloc(n_hist * sizeof(double))
    cdef int* touched = <int*> malloc(n_hist * sizeof(int))
    cdef double* top = <double*> malloc((k_eff if k_eff > 0 else 1) * sizeof(double))
    if acc == NULL or touched == NULL or top == NULL:
        if acc != NULL:
            free(acc)
        if touched != NULL:
            free(touched)
        if top != NULL:
            free(top)
        raise MemoryError()

    cdef Py_ssize_t i, ptr, hptr, t, m
    cdef int w, j, n_touched
    cdef double qv, qn, val, kth
    cdef Py_ssize_t pos
    try:
        for j in range(n_hist):
            acc[j] = 0.0
        for i in range(nq):
            qn = q_norms[i]
            n_touched = 0
            if qn > 0.0:
                for ptr in range(q_indptr[i], q_indptr[i + 1]):
                    w = q_indices[ptr]
                    qv = q_wdata[ptr]
                    if qv == 0.0:
                        continue
                    for hptr in range(h_indptr[w], h_indptr[w + 1]):
                        j = h_rows[hptr]
                        if acc[j] == 0.0:
                            touched[n_touched] = j
                            n_touched += 1
                        acc[j] += qv * h_wdata[hptr]
            # top-k selection over touched sims; untouched rows are zeros
            for t in range(k_eff):
                top[t] = -1.0
            for t in range(n_touched):
                j = touched[t]
                if h_norms[j] > 0.0:
                    val = (acc[j] / qn) / h_norms[j]
                else:
                    val = 0.0
                acc[j] = 0.0
                if val > top[k_eff - 1]:
                    pos = k_eff - 1
                    while pos > 0 and top[pos - 1] < val:
                        top[pos] = top[pos - 1]
                        pos -= 1
                    top[pos] = val
            kth = top[k_eff - 1]
            out[i] = kth if kth > 0.0 else 0.0
    finally:
        free(acc)
        free(touched)
        free(top)
    return out_arr

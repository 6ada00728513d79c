"""Pure numpy/scipy implementations of the hot kernels.

These are the reference semantics: the compiled extension in ``_ext.pyx``
must produce bit-identical results (same floating-point operations in the
same order). The Gibbs sweep is a plain Python loop and is only suitable for
small inputs; the kNN kernel delegates the heavy lifting to scipy's sparse
matmul and is usable at full benchmark scale.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def gibbs_sweeps(
    z: np.ndarray,  # int32[n] topic assignment per token, updated in place
    docs: np.ndarray,  # int32[n] batch-local doc index per token
    terms: np.ndarray,  # int32[n] term id per token
    ndk: np.ndarray,  # int32[D, K] doc-topic counts, updated in place
    nkw: np.ndarray,  # float64[K, V] topic-term counts incl. decayed history
    nk: np.ndarray,  # float64[K] topic totals
    alpha: float,
    beta: float,
    uniforms: np.ndarray,  # float64[n_sweeps, n] one uniform per token per sweep
) -> None:
    """Collapsed Gibbs sampling sweeps over one batch of tokens.

    Sampling weights: (ndk[d,k] + alpha) * (nkw[k,w] + beta) / (nk[k] + beta*V).
    The uniform draws are supplied by the caller so that independent
    implementations consume randomness identically.
    """
    n_tokens = len(z)
    n_sweeps = uniforms.shape[0]
    n_topics = nkw.shape[0]
    beta_v = beta * nkw.shape[1]
    cum = np.empty(n_topics, dtype=np.float64)
    for s in range(n_sweeps):
        urow = uniforms[s]
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
            u = urow[i] * total
            k_new = n_topics - 1
            for k in range(n_topics):
                if cum[k] > u:
                    k_new = k
                    break
            z[i] = k_new
            ndk[d, k_new] += 1
            nkw[k_new, w] += 1.0
            nk[k_new] += 1.0


def kth_largest_with_zeros(values: np.ndarray, n_total: int, k: int) -> float:
    """k-th largest of ``values`` padded with (n_total - len(values)) zeros.

    All values are >= 0, so padding zeros can only occupy trailing ranks.
    """
    k_eff = min(k, n_total)
    m = len(values)
    if k_eff <= 0:
        return 0.0
    if k_eff > m:
        return 0.0
    return float(np.partition(values, m - k_eff)[m - k_eff])


def knn_kth_cosine(
    q_indptr: np.ndarray,
    q_indices: np.ndarray,
    q_wdata: np.ndarray,  # query values, already term-weighted
    q_norms: np.ndarray,  # float64[nq] L2 norms of weighted query rows
    h_indptr: np.ndarray,  # CSC of the history matrix: one slice per term
    h_rows: np.ndarray,  # history doc index per entry
    h_wdata: np.ndarray,  # history values, already term-weighted
    h_norms: np.ndarray,  # float64[n_hist]
    n_hist: int,
    vocab_size: int,
    k: int,
) -> np.ndarray:
    """Cosine similarity to the k-th nearest history row, per query row.

    History rows sharing no weighted term with the query have similarity 0;
    they count as neighbors (exhaustive search over all of history). Rows
    with zero norm (all weights zero) also contribute similarity 0.
    """
    nq = len(q_indptr) - 1
    if n_hist == 0:
        return np.zeros(nq, dtype=np.float64)
    q_mat = sp.csr_matrix((q_wdata, q_indices, q_indptr), shape=(nq, vocab_size))
    ht_mat = sp.csr_matrix((h_wdata, h_rows, h_indptr), shape=(vocab_size, n_hist))
    sims = q_mat @ ht_mat  # no duplicate entries; per-cell sums run in term order
    qn = np.where(q_norms > 0, q_norms, np.inf)
    hn = np.where(h_norms > 0, h_norms, np.inf)
    data = sims.data / np.repeat(qn, np.diff(sims.indptr))
    data = data / hn[sims.indices]
    out = np.empty(nq, dtype=np.float64)
    for i in range(nq):
        row = data[sims.indptr[i] : sims.indptr[i + 1]]
        out[i] = kth_largest_with_zeros(row, n_hist, k)
    return out

"""Exact k-nearest-neighbor cosine search over an append-only document history.

Documents are stored as raw term-count vectors; each query day supplies a
per-term weight vector (e.g. IDF), applied to both queries and history, so
the same machinery serves any tf-times-weight representation. Search is
exhaustive (every history row is a candidate; rows sharing no weighted term
score similarity 0), which keeps it oracle-checkable.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .. import kernels
from ..corpus import DayBatch


def doc_count_rows(batch: DayBatch) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per-document (sorted unique term ids, counts) pairs for a batch."""
    rows = []
    for doc in batch.documents:
        ids, counts = np.unique(doc.tokens, return_counts=True)
        rows.append((ids.astype(np.int32), counts.astype(np.float64)))
    return rows


class CosineKnnIndex:
    """Growable store of count vectors with exact k-th-neighbor cosine search."""

    def __init__(self, vocab_size: int):
        self.vocab_size = vocab_size
        self._indptr = [0]
        self._indices: list[np.ndarray] = []
        self._data: list[np.ndarray] = []
        self._n_rows = 0

    def __len__(self) -> int:
        return self._n_rows

    def add_rows(self, rows: list[tuple[np.ndarray, np.ndarray]]) -> None:
        for ids, counts in rows:
            self._indices.append(ids)
            self._data.append(counts)
            self._indptr.append(self._indptr[-1] + len(ids))
            self._n_rows += 1

    def _csr_arrays(self, start_row: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        indptr = np.asarray(self._indptr[start_row:], dtype=np.int32)
        indptr = indptr - indptr[0]
        if self._indices[start_row:]:
            indices = np.concatenate(self._indices[start_row:]).astype(np.int32, copy=False)
            data = np.concatenate(self._data[start_row:])
        else:
            indices = np.zeros(0, dtype=np.int32)
            data = np.zeros(0, dtype=np.float64)
        return indptr, indices, data

    def kth_similarity(
        self,
        query_rows: list[tuple[np.ndarray, np.ndarray]],
        weights: np.ndarray,
        k: int,
        start_row: int = 0,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Cosine similarity of each query to its k-th nearest history row.

        Returns (kth_sims, query_norms). With fewer than k history rows the
        farthest available neighbor is used. Queries whose weighted vector is
        zero get norm 0 and similarity 0 (caller decides how to score them).
        """
        nq = len(query_rows)
        q_indptr = np.zeros(nq + 1, dtype=np.int32)
        parts_i, parts_d = [], []
        for i, (ids, counts) in enumerate(query_rows):
            q_indptr[i + 1] = q_indptr[i] + len(ids)
            parts_i.append(ids)
            parts_d.append(counts * weights[ids])
        q_indices = (
            np.concatenate(parts_i).astype(np.int32, copy=False)
            if parts_i
            else np.zeros(0, dtype=np.int32)
        )
        q_wdata = np.concatenate(parts_d) if parts_d else np.zeros(0, dtype=np.float64)
        q_norms = np.sqrt(np.add.reduceat(q_wdata**2, q_indptr[:-1])) if nq else np.zeros(0)
        q_norms = np.where(np.diff(q_indptr) > 0, q_norms, 0.0)

        n_hist = self._n_rows - start_row
        if n_hist <= 0:
            return np.zeros(nq, dtype=np.float64), q_norms

        h_indptr, h_indices, h_data = self._csr_arrays(start_row)
        h_wdata_csr = h_data * weights[h_indices]
        h_norms = np.sqrt(np.add.reduceat(h_wdata_csr**2, h_indptr[:-1].astype(np.int64)))

        h_csc = sp.csr_matrix(
            (h_data, h_indices, h_indptr), shape=(n_hist, self.vocab_size)
        ).tocsc()
        h_csc.sort_indices()
        col_spans = np.diff(h_csc.indptr)
        h_wdata_csc = h_csc.data * np.repeat(weights, col_spans)

        kth = kernels.knn_kth_cosine(
            q_indptr,
            q_indices,
            q_wdata,
            q_norms,
            h_csc.indptr.astype(np.int32, copy=False),
            h_csc.indices.astype(np.int32, copy=False),
            h_wdata_csc,
            h_norms,
            n_hist,
            self.vocab_size,
            k,
        )
        return kth, q_norms

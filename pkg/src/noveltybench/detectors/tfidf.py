"""First-story-style detector: TF-IDF vectors, cosine dissimilarity to the
k-th nearest historical neighbor.

Term weights use the history seen through the previous day,
idf(w) = ln((N+1)/(df(w)+1)); the same snapshot weights both the incoming
documents and the stored history, so an exact duplicate of a historical
document always scores ~0. Word flags rank the day's terms by IDF, so a term
never seen before today outranks anything already seen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import DayBatch, day_term_stats
from ..errors import ConfigError
from .base import DayReport, Detector, rank_docs, rank_terms
from .knn import CosineKnnIndex, doc_count_rows


@dataclass(frozen=True)
class TfIdfConfig:
    k: int = 5
    window_days: int = 0  # 0 = full history
    doc_threshold: float = 0.9
    m: int = 100

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"tfidf: k must be >= 1, got {self.k}")
        if self.window_days < 0:
            raise ConfigError("tfidf: window_days must be >= 0")
        if self.m < 0:
            raise ConfigError("tfidf: m must be >= 0")


class TfIdfDetector(Detector):
    name = "tfidf"

    def __init__(self, vocab_size: int, config: TfIdfConfig | None = None):
        super().__init__(vocab_size)
        self.config = config or TfIdfConfig()
        self.config.validate()
        self._index = CosineKnnIndex(vocab_size)
        self._df = np.zeros(vocab_size, dtype=np.int64)
        self._n_docs = 0
        self._day_start_rows: list[tuple[int, int]] = []  # (day, first row index)

    def _window_start_row(self, day: int) -> int:
        if self.config.window_days <= 0:
            return 0
        cutoff = day - self.config.window_days
        start = 0
        for d, row in self._day_start_rows:
            if d >= cutoff:
                break
            start = row
        else:
            start = len(self._index)
        return start

    def _step_empty(self, day: int) -> None:
        pass

    def _step(self, batch: DayBatch) -> DayReport:
        stats = day_term_stats(batch, self.vocab_size)
        warm = self._n_docs > 0
        idf = np.log((self._n_docs + 1.0) / (self._df + 1.0))

        word_scores: dict[int, float] = {}
        flagged_words: tuple[int, ...] = ()
        today_terms = np.nonzero(stats.df)[0]
        if warm:
            term_scores = idf[today_terms]
            word_scores = {int(w): float(s) for w, s in zip(today_terms, term_scores)}
            flagged_words = rank_terms(today_terms, term_scores, self.config.m)

        rows = doc_count_rows(batch)
        doc_ids = [d.doc_id for d in batch.documents]
        degenerate: set[str] = set()
        if not warm:
            doc_scores = {d: 1.0 for d in doc_ids}
            flagged_docs: tuple[str, ...] = ()
        else:
            kth, q_norms = self._index.kth_similarity(
                rows, idf, self.config.k, start_row=self._window_start_row(batch.day)
            )
            scores = 1.0 - kth
            doc_scores = {}
            for d, s, qn in zip(doc_ids, scores, q_norms):
                if qn == 0.0:
                    doc_scores[d] = 0.0
                    degenerate.add(d)
                else:
                    doc_scores[d] = float(s)
            flagged = {
                d: s
                for d, s in doc_scores.items()
                if s > self.config.doc_threshold and d not in degenerate
            }
            flagged_docs = rank_docs(flagged)

        self._day_start_rows.append((batch.day, len(self._index)))
        self._index.add_rows(rows)
        self._df += stats.df
        self._n_docs += stats.n_docs

        return DayReport(
            day=batch.day,
            word_scores=word_scores,
            flagged_words=flagged_words,
            doc_scores=doc_scores,
            flagged_docs=flagged_docs,
            degenerate_docs=frozenset(degenerate),
        )


def _stats(batch: DayBatch, vocab_size: int):
    from ..corpus import DayStats

    nv = vocab_size
    tf = np.zeros(nv, dtype=np.int64)
    df = np.zeros(nv, dtype=np.int64)
    n_tokens = 0
    for doc in batch.documents:
        counts = np.bincount(doc.tokens, minlength=nv)
        tf += counts
        df += counts > 0
        n_tokens += len(doc.tokens)
    return DayStats(tf=tf, df=df, n_tokens=n_tokens, n_docs=len(batch.documents))

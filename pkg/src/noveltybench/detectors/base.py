"""Shared per-day observation contract for all streaming detectors.

A detector consumes day batches in strictly increasing day order and emits one
:class:`DayReport` per delivered batch: per-term novelty scores, a ranked list
of flagged terms (capped at the per-day budget M), per-document novelty
scores, a ranked list of flagged documents, and zero or more alerts. Flagged
lists are always prefixes of the score-descending order with ties broken by
ascending id, and never reference anything from a future day.

Day gaps are allowed: skipped days are processed internally as empty days
(decay clocks advance, counts stay put), so feeding a sparse corpus directly
is equivalent to materializing its empty days.

Reports serialize to line-delimited JSON with sorted keys. Field schema per
line: ``day`` (int), ``flagged_words`` (term ids, rank order),
``flagged_docs`` (doc ids, rank order), ``alerts`` (list of
``{"day", "trigger_terms", "strength"}``), ``doc_scores`` (doc id -> score),
``degenerate_docs`` (doc ids). Per-term score maps are in-memory only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..corpus import DayBatch
from ..errors import StreamOrderError


@dataclass(frozen=True)
class Alert:
    """One day-level alarm with the terms that triggered it."""

    day: int
    trigger_terms: frozenset[int]
    strength: float


@dataclass(frozen=True)
class DayReport:
    day: int
    word_scores: dict[int, float] = field(default_factory=dict)
    flagged_words: tuple[int, ...] = ()
    doc_scores: dict[str, float] = field(default_factory=dict)
    flagged_docs: tuple[str, ...] = ()
    alerts: tuple[Alert, ...] = ()
    degenerate_docs: frozenset[str] = frozenset()
    word_clusters: tuple[tuple[int, ...], ...] = ()

    def to_json_line(self) -> str:
        rec = {
            "day": self.day,
            "flagged_words": [int(w) for w in self.flagged_words],
            "flagged_docs": list(self.flagged_docs),
            "alerts": [
                {
                    "day": a.day,
                    "trigger_terms": sorted(int(t) for t in a.trigger_terms),
                    "strength": a.strength,
                }
                for a in self.alerts
            ],
            "doc_scores": {d: float(s) for d, s in sorted(self.doc_scores.items())},
            "degenerate_docs": sorted(self.degenerate_docs),
        }
        return json.dumps(rec, sort_keys=True)

    @classmethod
    def from_json_line(cls, line: str) -> "DayReport":
        rec = json.loads(line)
        return cls(
            day=rec["day"],
            flagged_words=tuple(rec["flagged_words"]),
            flagged_docs=tuple(rec["flagged_docs"]),
            alerts=tuple(
                Alert(
                    day=a["day"],
                    trigger_terms=frozenset(a["trigger_terms"]),
                    strength=a["strength"],
                )
                for a in rec["alerts"]
            ),
            doc_scores=dict(rec["doc_scores"]),
            degenerate_docs=frozenset(rec["degenerate_docs"]),
        )


def rank_terms(ids: np.ndarray, scores: np.ndarray, limit: int) -> tuple[int, ...]:
    """Top ``limit`` term ids by descending score, ties by ascending id."""
    if len(ids) == 0 or limit <= 0:
        return ()
    order = np.lexsort((ids, -scores))
    return tuple(int(i) for i in ids[order[:limit]])


def rank_docs(scores: dict[str, float], limit: int | None = None) -> tuple[str, ...]:
    """Doc ids by descending score, ties by ascending id."""
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if limit is not None:
        ranked = ranked[:limit]
    return tuple(d for d, _ in ranked)


def _check_finite(values, what: str) -> None:
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"non-finite {what} in day report")


class Detector:
    """Base class enforcing the streaming contract.

    Subclasses implement ``_step(batch) -> DayReport`` for non-empty batches
    and ``_step_empty(day) -> None`` for empty/skipped days.
    """

    name = "detector"

    def __init__(self, vocab_size: int):
        self.vocab_size = vocab_size
        self._last_day: int | None = None

    def observe(self, batch: DayBatch) -> DayReport:
        if self._last_day is not None and batch.day <= self._last_day:
            raise StreamOrderError(
                f"{self.name}: batch for day {batch.day} after day {self._last_day}"
            )
        start = 0 if self._last_day is None else self._last_day + 1
        for day in range(start, batch.day):
            self._step_empty(day)
        if len(batch) == 0:
            self._step_empty(batch.day)
            report = DayReport(day=batch.day)
        else:
            report = self._step(batch)
        self._last_day = batch.day
        _check_finite(report.word_scores.values(), "word scores")
        _check_finite(report.doc_scores.values(), "doc scores")
        return report

    def _step(self, batch: DayBatch) -> DayReport:
        raise NotImplementedError

    def _step_empty(self, day: int) -> None:
        raise NotImplementedError

"""Data model and IO for tokenized, day-stamped, optionally labeled corpora.

A corpus is a sequence of day batches of bag-of-words documents over a fixed
vocabulary. The on-disk format is line-delimited UTF-8 text, one document per
line::

    doc_id<TAB>day<TAB>space-separated tokens<TAB>label

The label field is optional (it may be empty or absent). Lines starting with
``#`` are comments. Files written by :func:`write_corpus` are in canonical
form (days ascending, single spaces) and round-trip bit-exactly.

Corpus objects are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CorpusFormatError


@dataclass(frozen=True)
class Vocabulary:
    """Bijection between term strings and contiguous integer ids.

    Ids are assigned in sorted term order so that corpora built from the same
    token set always agree, regardless of document order.
    """

    terms: tuple[str, ...]
    index: dict[str, int] = field(repr=False)

    @classmethod
    def from_terms(cls, terms) -> "Vocabulary":
        ordered = tuple(sorted(set(terms)))
        return cls(terms=ordered, index={t: i for i, t in enumerate(ordered)})

    def __len__(self) -> int:
        return len(self.terms)

    def id_of(self, term: str) -> int:
        return self.index[term]

    def term_of(self, term_id: int) -> str:
        return self.terms[term_id]


@dataclass(frozen=True)
class Document:
    """One bag-of-words document on a discrete day.

    ``tokens`` is a multiset of term ids; order carries no meaning. ``label``
    is a ground-truth topic id, present only for labeled corpora.
    """

    doc_id: str
    day: int
    tokens: np.ndarray  # int32 term ids, non-empty
    label: int | None = None

    def __post_init__(self):
        if self.day < 0:
            raise CorpusFormatError(f"document {self.doc_id!r}: negative day {self.day}")
        if len(self.tokens) == 0:
            raise CorpusFormatError(f"document {self.doc_id!r}: empty token list")


@dataclass(frozen=True)
class DayBatch:
    """All documents arriving on one day, delivered to detectors as a unit."""

    day: int
    documents: tuple[Document, ...]

    def __post_init__(self):
        for d in self.documents:
            if d.day != self.day:
                raise CorpusFormatError(
                    f"document {d.doc_id!r} has day {d.day}, batch has day {self.day}"
                )

    def __len__(self) -> int:
        return len(self.documents)


@dataclass(frozen=True)
class GroundTruth:
    """What a detector should find: the novel topic, its onset, words and docs."""

    novel_topic_id: int
    onset_day: int
    novel_words: frozenset[int]
    novel_doc_ids: frozenset[str]


@dataclass(frozen=True)
class LabeledCorpus:
    """A full corpus: vocabulary, day batches in ascending day order, optional truth."""

    vocabulary: Vocabulary
    batches: tuple[DayBatch, ...]
    ground_truth: GroundTruth | None = None

    def __post_init__(self):
        days = [b.day for b in self.batches]
        if sorted(days) != days or len(set(days)) != len(days):
            raise CorpusFormatError("batches must have strictly increasing days")
        nv = len(self.vocabulary)
        for b in self.batches:
            for d in b.documents:
                if d.tokens.max(initial=-1) >= nv:
                    raise CorpusFormatError(
                        f"document {d.doc_id!r} references term id >= |V|={nv}"
                    )
        if self.ground_truth is not None:
            gt = self.ground_truth
            by_id = {d.doc_id: d for b in self.batches for d in b.documents}
            for doc_id in gt.novel_doc_ids:
                doc = by_id.get(doc_id)
                if doc is None:
                    raise CorpusFormatError(f"ground truth references unknown doc {doc_id!r}")
                if doc.label != gt.novel_topic_id:
                    raise CorpusFormatError(
                        f"novel doc {doc_id!r} has label {doc.label}, "
                        f"expected {gt.novel_topic_id}"
                    )
                if doc.day < gt.onset_day:
                    raise CorpusFormatError(
                        f"novel doc {doc_id!r} precedes onset day {gt.onset_day}"
                    )
            if any(w >= nv or w < 0 for w in gt.novel_words):
                raise CorpusFormatError("ground truth references term id outside vocabulary")

    @property
    def n_documents(self) -> int:
        return sum(len(b) for b in self.batches)

    def documents(self):
        for b in self.batches:
            yield from b.documents


@dataclass(frozen=True)
class DayStats:
    """Per-term counts for one day batch: token counts, doc counts, totals."""

    tf: np.ndarray  # int64[|V|]
    df: np.ndarray  # int64[|V|]
    n_tokens: int
    n_docs: int


def day_term_stats(batch: DayBatch, vocab: Vocabulary | int) -> DayStats:
    """Count per-term token frequency and document frequency for one day.

    ``vocab`` may be a Vocabulary or a plain vocabulary size. Terms absent
    from the batch report (0, 0). An empty batch yields all zeros.
    """
    nv = vocab if isinstance(vocab, int) else len(vocab)
    tf = np.zeros(nv, dtype=np.int64)
    df = np.zeros(nv, dtype=np.int64)
    n_tokens = 0
    for doc in batch.documents:
        counts = np.bincount(doc.tokens, minlength=nv)
        tf += counts
        df += counts > 0
        n_tokens += len(doc.tokens)
    return DayStats(tf=tf, df=df, n_tokens=n_tokens, n_docs=len(batch.documents))


def _parse_line(line: str, lineno: int) -> tuple[str, int, list[str], int | None]:
    parts = line.split("\t")
    if len(parts) not in (3, 4):
        raise CorpusFormatError(
            f"line {lineno}: expected 3 or 4 tab-separated fields, got {len(parts)}"
        )
    doc_id = parts[0]
    if not doc_id:
        raise CorpusFormatError(f"line {lineno}: empty doc_id")
    try:
        day = int(parts[1])
    except ValueError:
        raise CorpusFormatError(f"line {lineno}: day field {parts[1]!r} is not an integer")
    if day < 0:
        raise CorpusFormatError(f"line {lineno}: negative day {day}")
    tokens = parts[2].split()
    if not tokens:
        raise CorpusFormatError(f"line {lineno}: empty token list")
    label: int | None = None
    if len(parts) == 4 and parts[3] != "":
        try:
            label = int(parts[3])
        except ValueError:
            raise CorpusFormatError(f"line {lineno}: label field {parts[3]!r} is not an integer")
    return doc_id, day, tokens, label


def read_corpus(path: str | Path, ground_truth: GroundTruth | None = None) -> LabeledCorpus:
    """Read a corpus file, grouping documents into day batches sorted by day.

    The vocabulary is built from the union of all tokens, ids assigned in
    sorted term order.
    """
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            records.append(_parse_line(line, lineno))

    vocab = Vocabulary.from_terms(t for _, _, toks, _ in records for t in toks)
    by_day: dict[int, list[Document]] = {}
    for doc_id, day, tokens, label in records:
        ids = np.fromiter((vocab.id_of(t) for t in tokens), dtype=np.int32, count=len(tokens))
        by_day.setdefault(day, []).append(
            Document(doc_id=doc_id, day=day, tokens=ids, label=label)
        )
    batches = tuple(
        DayBatch(day=day, documents=tuple(by_day[day])) for day in sorted(by_day)
    )
    return LabeledCorpus(vocabulary=vocab, batches=batches, ground_truth=ground_truth)


def write_corpus(corpus: LabeledCorpus, path: str | Path) -> None:
    """Write a corpus in canonical form; read_corpus(write_corpus(c)) == c.

    Documents without a label are written with three fields (no trailing tab).
    """
    vocab = corpus.vocabulary
    with open(path, "w", encoding="utf-8") as fh:
        for batch in corpus.batches:
            for doc in batch.documents:
                toks = " ".join(vocab.term_of(int(t)) for t in doc.tokens)
                if doc.label is None:
                    fh.write(f"{doc.doc_id}\t{doc.day}\t{toks}\n")
                else:
                    fh.write(f"{doc.doc_id}\t{doc.day}\t{toks}\t{doc.label}\n")


def stream_batches(corpus: LabeledCorpus):
    """Yield the corpus day batches in order (detector-facing view)."""
    yield from corpus.batches

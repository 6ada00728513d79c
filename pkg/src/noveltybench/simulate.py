"""Corpus simulator: topic mixture model with a scheduled novel-topic dynamic.

Topics are probability distributions over a shared vocabulary, drawn from a
symmetric Dirichlet whose concentration controls sparsity. Every day each
normal topic emits a constant number of documents; one novel topic emits
documents according to a scenario curve (cyclical pulses, an emergent ramp,
or a Gaussian event). Document generation is i.i.d. token sampling from the
topic distribution, so corpora are fully determined by (config, scenario,
seed).

The inter-topic divergence of the novel topic can be calibrated to a target
symmetric KL value by mixing its Dirichlet draw toward the nearest normal
topic (bisection on the mixing weight).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .corpus import DayBatch, Document, GroundTruth, LabeledCorpus, Vocabulary
from .divergence import kl_divergence, smooth, symmetric_kl
from .errors import ConfigError, UnreachableTargetError

FAMILIES = ("cyclical", "emergent", "event")


@dataclass(frozen=True)
class SimulatorConfig:
    vocab_size: int = 10_000
    n_topics: int = 10  # last topic is the novel one
    doc_length: int = 100
    horizon_days: int = 100
    background_docs_per_topic_per_day: int = 20
    alpha: float = 0.1
    target_kl: float | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.n_topics < 2:
            raise ConfigError(f"n_topics must be >= 2, got {self.n_topics}")
        for name in (
            "vocab_size",
            "doc_length",
            "horizon_days",
            "background_docs_per_topic_per_day",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.target_kl is not None and self.target_kl <= 0:
            raise ConfigError(f"target_kl must be positive, got {self.target_kl}")


@dataclass(frozen=True)
class Topic:
    """A probability distribution over the vocabulary."""

    topic_id: int
    probs: np.ndarray

    def __post_init__(self):
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"topic {self.topic_id}: probabilities sum to {total}")
        if (self.probs < 0).any():
            raise ValueError(f"topic {self.topic_id}: negative probability entry")


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameterized daily document-count curve for the novel topic.

    ``onset_day`` is the first day the curve may be nonzero: the ramp start
    for emergent, the first pulse start for cyclical, and the (clamped) start
    of the Gaussian window for event scenarios.
    """

    scenario_id: int
    family: str
    amplitude: float
    onset_day: int
    period_days: int = 0  # cyclical
    pulse_width_days: int = 0  # cyclical
    slope: float = 0.0  # emergent: docs/day of ramp growth
    peak_day: int = 0  # event
    width_days: float = 0.0  # event: Gaussian sigma

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown scenario family {self.family!r}")
        if self.amplitude < 0:
            raise ConfigError("amplitude must be non-negative")
        if self.onset_day < 0:
            raise ConfigError("onset_day must be non-negative")
        if self.family == "cyclical":
            if self.period_days <= 0 or not (0 < self.pulse_width_days <= self.period_days):
                raise ConfigError(
                    f"cyclical scenario needs 0 < pulse_width_days <= period_days, "
                    f"got {self.pulse_width_days}/{self.period_days}"
                )
        elif self.family == "emergent":
            if self.slope <= 0:
                raise ConfigError("emergent scenario needs positive slope")
        elif self.family == "event":
            if self.width_days <= 0:
                raise ConfigError("event scenario needs positive width_days")


def _round_count(x: float) -> int:
    return int(np.floor(x + 0.5))


def scenario_curve(spec: ScenarioSpec, day: int) -> int:
    """Number of novel-topic documents emitted on ``day`` (non-negative int)."""
    if day < spec.onset_day:
        return 0
    if spec.family == "cyclical":
        return _round_count(spec.amplitude) if (day - spec.onset_day) % spec.period_days < spec.pulse_width_days else 0
    if spec.family == "emergent":
        return _round_count(min(spec.amplitude, spec.slope * (day - spec.onset_day)))
    # event: Gaussian bump, zeroed outside +/- 3 sigma
    if abs(day - spec.peak_day) > 3 * spec.width_days:
        return 0
    return _round_count(
        spec.amplitude * np.exp(-((day - spec.peak_day) ** 2) / (2.0 * spec.width_days**2))
    )


def default_scenarios(horizon_days: int = 100) -> dict[int, ScenarioSpec]:
    """The 9 stock scenarios: 3 cyclical, 3 emergent, 3 event variants.

    Onset sits at mid-horizon so every detector gets a warm-up window of
    purely background data.
    """
    mid = horizon_days // 2
    peak = _round_count(0.7 * horizon_days)
    specs = {}
    for sid, period in zip((1, 2, 3), (10, 20, 30)):
        specs[sid] = ScenarioSpec(
            scenario_id=sid,
            family="cyclical",
            amplitude=40,
            onset_day=mid,
            period_days=period,
            pulse_width_days=period // 2,
        )
    for sid, slope in zip((4, 5, 6), (1.0, 2.0, 5.0)):
        specs[sid] = ScenarioSpec(
            scenario_id=sid, family="emergent", amplitude=40, onset_day=mid, slope=slope
        )
    for sid, sigma in zip((7, 8, 9), (4.0, 2.0, 1.0)):
        onset = max(int(np.ceil(peak - 3 * sigma)), mid)
        specs[sid] = ScenarioSpec(
            scenario_id=sid,
            family="event",
            amplitude=50,
            onset_day=onset,
            peak_day=peak,
            width_days=sigma,
        )
    return specs


def null_scenario(horizon_days: int = 100) -> ScenarioSpec:
    """A scenario emitting no novel documents at all (background-only corpus)."""
    return ScenarioSpec(
        scenario_id=0,
        family="emergent",
        amplitude=0,
        onset_day=horizon_days // 2,
        slope=1.0,
    )


def sample_topics(config: SimulatorConfig, rng: np.random.Generator) -> list[Topic]:
    """Draw n_topics independent symmetric-Dirichlet(alpha) distributions."""
    config.validate()
    topics = []
    for tid in range(config.n_topics):
        g = rng.gamma(shape=config.alpha, scale=1.0, size=config.vocab_size)
        total = g.sum()
        if total <= 0 or not np.isfinite(total):  # pathological underflow
            g = g + 1e-300
            total = g.sum()
        topics.append(Topic(topic_id=tid, probs=g / total))
    return topics


@dataclass(frozen=True)
class CalibrationResult:
    achieved: float
    mix_weight: float
    iterations: int
    nearest_topic_id: int
    kl_forward: float
    kl_backward: float


def _nearest_normal(probs: np.ndarray, normals: list[Topic]) -> tuple[float, int]:
    best, best_id = np.inf, -1
    for t in normals:
        d = symmetric_kl(probs, t.probs)
        if d < best:
            best, best_id = d, t.topic_id
    return best, best_id


def calibrate_divergence(
    topics: list[Topic],
    target_kl: float,
    rel_tol: float = 0.05,
    max_iter: int = 60,
) -> tuple[list[Topic], CalibrationResult]:
    """Replace the novel (last) topic so its divergence hits the target.

    The replacement is a convex mixture of the novel topic's own draw and the
    normal topic nearest to it; the mixing weight is found by bisection until
    the symmetric KL to the nearest normal topic is within ``rel_tol`` of
    ``target_kl``. Normal topics are left untouched.
    """
    if target_kl <= 0:
        raise ConfigError(f"target_kl must be positive, got {target_kl}")
    if len(topics) < 2:
        raise ConfigError("calibration needs at least 2 topics")
    normals = topics[:-1]
    fresh = topics[-1].probs
    max_div, anchor_id = _nearest_normal(fresh, normals)
    if target_kl > max_div:
        raise UnreachableTargetError(target_kl, max_div)
    anchor = next(t.probs for t in normals if t.topic_id == anchor_id)

    def measure(lam: float) -> tuple[float, int]:
        mix = lam * fresh + (1.0 - lam) * anchor
        mix = mix / mix.sum()
        return _nearest_normal(mix, normals)

    lo, hi = 0.0, 1.0
    lam = 1.0
    achieved, near_id = max_div, anchor_id
    iterations = 0
    for iterations in range(1, max_iter + 1):
        lam = 0.5 * (lo + hi)
        achieved, near_id = measure(lam)
        if abs(achieved - target_kl) <= rel_tol * target_kl:
            break
        if achieved > target_kl:
            hi = lam
        else:
            lo = lam
    mix = lam * fresh + (1.0 - lam) * anchor
    mix = mix / mix.sum()
    near_probs = next(t.probs for t in normals if t.topic_id == near_id)
    result = CalibrationResult(
        achieved=achieved,
        mix_weight=lam,
        iterations=iterations,
        nearest_topic_id=near_id,
        kl_forward=kl_divergence(mix, smooth(near_probs)),
        kl_backward=kl_divergence(near_probs, smooth(mix)),
    )
    new_topics = list(normals) + [Topic(topic_id=topics[-1].topic_id, probs=mix)]
    return new_topics, result


def sample_documents(
    probs: np.ndarray,
    n_docs: int,
    doc_length: int,
    rng: np.random.Generator,
) -> list[np.ndarray]:
    """Sample token multisets for ``n_docs`` documents of one topic."""
    if n_docs == 0:
        return []
    counts = rng.multinomial(doc_length, probs, size=n_docs)
    ids = np.arange(len(probs), dtype=np.int32)
    docs = []
    for row in counts:
        nz = row.nonzero()[0]
        docs.append(np.repeat(ids[nz], row[nz]))
    return docs


def _term_strings(vocab_size: int) -> list[str]:
    width = len(str(vocab_size - 1))
    return [f"w{i:0{width}d}" for i in range(vocab_size)]


def top_terms(probs: np.ndarray, n: int) -> np.ndarray:
    """Ids of the ``n`` highest-probability terms, ties broken by ascending id."""
    order = np.argsort(-probs, kind="stable")
    return order[: min(n, len(probs))]


def generate_corpus(
    config: SimulatorConfig,
    spec: ScenarioSpec,
    rng: np.random.Generator | None = None,
) -> tuple[LabeledCorpus, dict]:
    """Generate a labeled corpus plus a metadata record (dict, JSON-ready).

    Every day each normal topic emits a constant number of documents and the
    novel topic emits ``scenario_curve(spec, day)`` documents; each document
    is ``doc_length`` i.i.d. token draws from its topic. Fully deterministic
    given (config, spec, config.seed).
    """
    config.validate()
    spec.validate()
    if rng is None:
        rng = np.random.default_rng(config.seed)

    topics = sample_topics(config, rng)
    calib: CalibrationResult | None = None
    if config.target_kl is not None:
        topics, calib = calibrate_divergence(topics, config.target_kl)

    novel_id = config.n_topics - 1
    vocab = Vocabulary.from_terms(_term_strings(config.vocab_size))

    batches = []
    novel_doc_ids: list[str] = []
    onset_realized: int | None = None
    novel_counts = []
    for day in range(config.horizon_days):
        docs: list[Document] = []
        seq = 0
        for topic in topics[:-1]:
            for tokens in sample_documents(
                topic.probs, config.background_docs_per_topic_per_day, config.doc_length, rng
            ):
                docs.append(
                    Document(
                        doc_id=f"d{day:03d}-{seq:04d}",
                        day=day,
                        tokens=tokens,
                        label=topic.topic_id,
                    )
                )
                seq += 1
        n_novel = scenario_curve(spec, day)
        novel_counts.append(n_novel)
        if n_novel > 0 and onset_realized is None:
            onset_realized = day
        for tokens in sample_documents(topics[-1].probs, n_novel, config.doc_length, rng):
            doc_id = f"d{day:03d}-{seq:04d}"
            docs.append(Document(doc_id=doc_id, day=day, tokens=tokens, label=novel_id))
            novel_doc_ids.append(doc_id)
            seq += 1
        batches.append(DayBatch(day=day, documents=tuple(docs)))

    truth: GroundTruth | None = None
    if novel_doc_ids:
        words = top_terms(topics[-1].probs, 100)
        truth = GroundTruth(
            novel_topic_id=novel_id,
            onset_day=int(onset_realized),
            novel_words=frozenset(int(w) for w in words),
            novel_doc_ids=frozenset(novel_doc_ids),
        )
    corpus = LabeledCorpus(vocabulary=vocab, batches=tuple(batches), ground_truth=truth)

    normal_divs = [
        symmetric_kl(topics[i].probs, topics[j].probs)
        for i in range(config.n_topics - 1)
        for j in range(i + 1, config.n_topics - 1)
    ]
    natural_div, natural_near = _nearest_normal(topics[-1].probs, topics[:-1])
    meta = {
        "seed": config.seed,
        "simulator": asdict(config),
        "scenario": asdict(spec),
        "onset_day": onset_realized,
        "novel_topic_id": novel_id if truth is not None else None,
        "novel_doc_ids": sorted(novel_doc_ids),
        "novel_words": sorted(vocab.term_of(int(w)) for w in top_terms(topics[-1].probs, 100))
        if truth is not None
        else [],
        "novel_daily_counts": novel_counts,
        "novel_nearest_normal_sym_kl": natural_div,
        "novel_nearest_normal_topic": natural_near,
        "normal_pair_sym_kl": {
            "min": float(min(normal_divs)) if normal_divs else None,
            "mean": float(np.mean(normal_divs)) if normal_divs else None,
            "max": float(max(normal_divs)) if normal_divs else None,
        },
        "calibration": asdict(calib) if calib is not None else None,
    }
    return corpus, meta


def write_metadata(meta: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_metadata(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def ground_truth_from_metadata(meta: dict, vocab: Vocabulary) -> GroundTruth | None:
    """Rebuild a GroundTruth from a metadata record against a (re)read vocabulary."""
    if meta.get("novel_topic_id") is None:
        return None
    return GroundTruth(
        novel_topic_id=int(meta["novel_topic_id"]),
        onset_day=int(meta["onset_day"]),
        novel_words=frozenset(vocab.id_of(t) for t in meta["novel_words"]),
        novel_doc_ids=frozenset(meta["novel_doc_ids"]),
    )

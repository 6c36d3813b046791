"""Token-level scoring, segmentation similarity, exact paired significance
testing, and the three experiment scenarios (all-data, in-domain, and
cross-domain cross-validation).

All scenario aggregation happens on summed token confusion matrices, so
aggregated scores are recomputable from the stored matrices bit-exactly and
do not depend on scheduling order.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.stats import binom as _binom

from .agreement import AgreementResult, permuted_alpha
from .corpus import Corpus, Document, LOGOS_TYPES, TOPICS
from .encoding import (
    BIO_LABELS,
    SentenceLabeling,
    component_of,
    expand_to_tokens,
    is_begin,
    sentence_approximate,
    tokens_from_annotation,
)
from .features import FeatureConfig, SentenceFeatureExtractor
from .labeler import ArgumentComponentLabeler
from .util import derive_seed

JOINT_LOGOS = tuple(LOGOS_TYPES)


# ---------------------------------------------------------------------------
# Token-level scoring

@dataclass
class EvalCore:
    labels: tuple[str, ...]
    confusion: np.ndarray  # gold x predicted token counts
    per_class: dict[str, dict[str, float]]
    macro_f1: float
    accuracy: float

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "per_class": self.per_class,
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
        }


def core_from_confusion(confusion: np.ndarray, labels: Sequence[str] = BIO_LABELS) -> EvalCore:
    """Per-class precision/recall/F1 and their unweighted mean over all
    classes; classes absent from both gold and prediction keep F1 = 0."""
    confusion = np.asarray(confusion, dtype=np.int64)
    total = int(confusion.sum())
    if total == 0:
        raise ValueError("empty confusion matrix")
    per_class = {}
    f1s = []
    for i, label in enumerate(labels):
        tp = int(confusion[i, i])
        gold_count = int(confusion[i].sum())
        pred_count = int(confusion[:, i].sum())
        precision = tp / pred_count if pred_count else 0.0
        recall = tp / gold_count if gold_count else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": gold_count,
        }
        f1s.append(f1)
    return EvalCore(
        labels=tuple(labels),
        confusion=confusion,
        per_class=per_class,
        macro_f1=sum(f1s) / len(f1s),
        accuracy=float(np.trace(confusion)) / total,
    )


def confusion_matrix(
    gold: Sequence[str], predicted: Sequence[str], labels: Sequence[str] = BIO_LABELS
) -> np.ndarray:
    if len(gold) != len(predicted):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(predicted)} predicted")
    index = {label: i for i, label in enumerate(labels)}
    out = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(gold, predicted):
        out[index[g], index[p]] += 1
    return out


def token_macro_f1(
    gold: Sequence[str], predicted: Sequence[str], labels: Sequence[str] = BIO_LABELS
) -> EvalCore:
    """Exact-match token classification over the full label set."""
    return core_from_confusion(confusion_matrix(gold, predicted, labels), labels)


def prob_confusion_view(core: EvalCore) -> dict[str, dict[str, float]]:
    """Row-normalized confusion (gold rows); rows without mass are absent."""
    out = {}
    for i, label in enumerate(core.labels):
        row_total = int(core.confusion[i].sum())
        if row_total == 0:
            continue
        out[label] = {
            other: int(core.confusion[i, j]) / row_total for j, other in enumerate(core.labels)
        }
    return out


# ---------------------------------------------------------------------------
# Segmentation and boundary similarity

@dataclass(frozen=True)
class Segmentation:
    length: int
    boundaries: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for b in self.boundaries:
            if not (0 < b < self.length):
                raise ValueError(f"boundary {b} outside (0, {self.length})")
            if b <= prev:
                raise ValueError("boundaries must be strictly increasing")
            prev = b


def segmentation_from_labels(tokens: Sequence[str]) -> Segmentation:
    """A boundary wherever the component identity changes; a *-B tag starts a
    new component even after an identical type, and O runs form segments too."""
    if not tokens:
        raise ValueError("empty token sequence")
    boundaries = []
    for t in range(1, len(tokens)):
        if component_of(tokens[t]) != component_of(tokens[t - 1]) or is_begin(tokens[t]):
            boundaries.append(t)
    return Segmentation(length=len(tokens), boundaries=tuple(boundaries))


def units_from_token_labels(tokens: Sequence[str]) -> list[tuple[int, int, str]]:
    """Typed (first, last, category) units from a BIO token sequence."""
    units = []
    start = None
    current = None
    for t, label in enumerate(tokens):
        comp = component_of(label)
        if comp != current or (comp is not None and is_begin(label)):
            if current is not None:
                units.append((start, t - 1, current.lower()))
            start = t if comp is not None else None
            current = comp
    if current is not None:
        units.append((start, len(tokens) - 1, current.lower()))
    return units


def _match_costs(a: Sequence[int], b: Sequence[int], window: int) -> tuple[float, int]:
    """Minimum boundary-edit cost between two sorted unmatched boundary lists,
    preferring more transpositions among equal costs.  Optimal matchings of
    1-d positions are non-crossing, so a monotone DP suffices."""

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> tuple[float, int]:
        if i == len(a) and j == len(b):
            return (0.0, 0)
        best: Optional[tuple[float, int]] = None

        def consider(cost: float, transpositions: int):
            nonlocal best
            key = (cost, -transpositions)
            if best is None or key < (best[0], -best[1]):
                best = (cost, transpositions)

        if i < len(a):
            c, t = go(i + 1, j)
            consider(c + 1.0, t)
        if j < len(b):
            c, t = go(i, j + 1)
            consider(c + 1.0, t)
        if i < len(a) and j < len(b) and 0 < abs(a[i] - b[j]) < window:
            c, t = go(i + 1, j + 1)
            consider(c + abs(a[i] - b[j]) / window, t + 1)
        return best

    result = go(0, 0)
    go.cache_clear()
    return result


def boundary_similarity(a: Segmentation, b: Segmentation, window: int = 2) -> float:
    """One minus the normalized boundary-edit cost: full additions/deletions
    cost 1, a near-miss transposition within the window costs its offset as a
    fraction of the window; normalized by the count of involved boundaries."""
    if a.length != b.length:
        raise ValueError("segmentations cover different continuum lengths")
    if window < 1:
        raise ValueError("window must be >= 1")
    set_a, set_b = set(a.boundaries), set(b.boundaries)
    matches = len(set_a & set_b)
    only_a = sorted(set_a - set_b)
    only_b = sorted(set_b - set_a)
    cost, transpositions = _match_costs(tuple(only_a), tuple(only_b), window)
    additions = len(only_a) + len(only_b) - 2 * transpositions
    involved = matches + transpositions + additions
    if involved == 0:
        return 1.0
    return 1.0 - cost / involved


# ---------------------------------------------------------------------------
# Paired exact significance test

def _binom_tail(n: int, kmax: int) -> float:
    """P[X >= kmax] for X ~ Binomial(n, 1/2); exact integers up to n=5000."""
    if kmax <= 0:
        return 1.0
    if kmax > n:
        return 0.0
    if n <= 5000:
        total = 0
        c = math.comb(n, kmax)
        for k in range(kmax, n + 1):
            total += c
            c = c * (n - k) // (k + 1)
        return total / (1 << n)
    return float(_binom.sf(kmax - 1, n, 0.5))


def liddell_exact_test(
    gold: Sequence[str], pred_a: Sequence[str], pred_b: Sequence[str]
) -> float:
    """Two-sided exact matched-pairs test on per-token correctness of two
    systems: p = min(1, 2 * P[X >= max(n10, n01)]) with X ~ Bin(n10+n01, 1/2),
    and p = 1 when the systems disagree on no token."""
    if not (len(gold) == len(pred_a) == len(pred_b)):
        raise ValueError("gold and both predictions must have equal length")
    n10 = sum(1 for g, a, b in zip(gold, pred_a, pred_b) if a == g and b != g)
    n01 = sum(1 for g, a, b in zip(gold, pred_a, pred_b) if a != g and b == g)
    n = n10 + n01
    if n == 0:
        return 1.0
    return min(1.0, 2.0 * _binom_tail(n, max(n10, n01)))


# ---------------------------------------------------------------------------
# Experiment harness

@dataclass
class ExperimentResources:
    """External inputs shared across folds; the topic model, when absent and
    needed, is trained per fold on training documents only."""

    embeddings: Optional[object] = None
    layers: Optional[Mapping] = None
    topic_model: Optional[object] = None
    lda_params: Optional[dict] = None


@dataclass
class EvalReport:
    core: EvalCore
    prob_confusion: dict
    alpha_u: Optional[AgreementResult]
    boundary_similarity: Optional[float]
    metadata: dict
    predictions: dict[str, list[str]] = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            **self.core.to_json(),
            "prob_confusion": self.prob_confusion,
            "alpha_u": None
            if self.alpha_u is None
            else {
                "value": self.alpha_u.value,
                "n_permutations": self.alpha_u.n_permutations,
                "std_error": self.alpha_u.std_error,
            },
            "boundary_similarity": self.boundary_similarity,
            "metadata": self.metadata,
        }


def _require_gold(docs: Sequence[Document]) -> None:
    for doc in docs:
        if doc.gold is None:
            raise ValueError(f"document '{doc.doc_id}' has no gold annotations")


def _gold_sentence_labels(doc: Document) -> list[str]:
    return list(sentence_approximate(doc, doc.gold).labels)


def _fold_task(payload: tuple) -> tuple[int, dict[str, list[str]], dict]:
    (
        fold_index,
        corpus,
        train_ids,
        test_ids,
        config_digits,
        window,
        min_count,
        resources,
        epochs,
        seed,
        labeler_kind,
    ) = payload
    by_id = {doc.doc_id: doc for doc in corpus.documents}
    test_docs = [by_id[i] for i in test_ids]

    if labeler_kind == "oracle":
        predictions = {
            doc.doc_id: expand_to_tokens(doc, sentence_approximate(doc, doc.gold))
            for doc in test_docs
        }
        audit = {
            "fold": fold_index,
            "train_ids": list(train_ids),
            "test_ids": list(test_ids),
            "labeler": "oracle",
            "resource_fit_ids": [],
        }
        return fold_index, predictions, audit

    extractor = SentenceFeatureExtractor(
        feature_sets=config_digits,
        window=window,
        min_count=min_count,
        embeddings=resources.embeddings if resources else None,
        layers=resources.layers if resources else None,
        topic_model=resources.topic_model if resources else None,
        lda_params=(resources.lda_params if resources else None),
        seed=derive_seed(seed, "lda", config_digits, fold_index),
    )
    extractor.fit(corpus, train_ids)

    train_docs = [by_id[i] for i in train_ids]
    X_train = [extractor.transform(doc) for doc in train_docs]
    y_train = [_gold_sentence_labels(doc) for doc in train_docs]
    labeler = ArgumentComponentLabeler(
        epochs=epochs, seed=derive_seed(seed, "labeler", config_digits, fold_index)
    )
    labeler.fit(X_train, y_train, feature_config=extractor.config_.to_dict())

    predictions = {}
    for doc in test_docs:
        if doc.n_sentences == 0:
            predictions[doc.doc_id] = []
            continue
        labels = labeler.predict([extractor.transform(doc)])[0]
        predictions[doc.doc_id] = expand_to_tokens(
            doc, SentenceLabeling(doc_id=doc.doc_id, labels=tuple(labels))
        )
    audit = {
        "fold": fold_index,
        "train_ids": list(train_ids),
        "test_ids": list(test_ids),
        "labeler": "perceptron",
        "resource_fit_ids": list(train_ids),
        "degraded_features": sorted(extractor.degraded_),
    }
    return fold_index, predictions, audit


def _run_folds(tasks: list[tuple], workers: int) -> list[tuple[int, dict, dict]]:
    if workers <= 1 or len(tasks) <= 1:
        results = [_fold_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fold_task, tasks))
    return sorted(results, key=lambda r: r[0])


def _contiguous_folds(ids: list[str], k: int) -> list[list[str]]:
    sizes = [len(ids) // k + (1 if i < len(ids) % k else 0) for i in range(k)]
    folds = []
    start = 0
    for size in sizes:
        folds.append(ids[start:start + size])
        start += size
    return folds


def _assemble_report(
    corpus: Corpus,
    predictions: dict[str, list[str]],
    metadata: dict,
    alpha_n_perm: int = 10,
    alpha_seed: int = 0,
) -> EvalReport:
    docs = [doc for doc in corpus.documents if doc.doc_id in predictions]
    gold_tokens: list[str] = []
    pred_tokens: list[str] = []
    doc_entries = []
    boundary_scores = []
    for doc in docs:
        gold = tokens_from_annotation(doc, doc.gold)
        pred = predictions[doc.doc_id]
        gold_tokens.extend(gold)
        pred_tokens.extend(pred)
        if doc.n_tokens > 0:
            doc_entries.append(
                (
                    doc.n_tokens,
                    {
                        "gold": [
                            (s.first_token, s.last_token, s.component_type)
                            for s in doc.gold.spans_in_dimension("logos")
                        ],
                        "system": units_from_token_labels(pred),
                    },
                )
            )
            boundary_scores.append(
                boundary_similarity(
                    segmentation_from_labels(gold), segmentation_from_labels(pred)
                )
            )
    core = token_macro_f1(gold_tokens, pred_tokens)
    try:
        alpha = permuted_alpha(doc_entries, JOINT_LOGOS, n_perm=alpha_n_perm, seed=alpha_seed)
    except Exception:
        alpha = None
    return EvalReport(
        core=core,
        prob_confusion=prob_confusion_view(core),
        alpha_u=alpha,
        boundary_similarity=(
            sum(boundary_scores) / len(boundary_scores) if boundary_scores else None
        ),
        metadata=metadata,
        predictions=predictions,
    )


def _pairwise_significance(
    corpus: Corpus, reports: Mapping[str, EvalReport]
) -> dict[str, float]:
    doc_ids = [
        doc.doc_id
        for doc in corpus.documents
        if all(doc.doc_id in r.predictions for r in reports.values())
    ]
    by_id = {doc.doc_id: doc for doc in corpus.documents}
    gold = [t for i in doc_ids for t in tokens_from_annotation(by_id[i], by_id[i].gold)]
    flat = {
        name: [t for i in doc_ids for t in r.predictions[i]] for name, r in reports.items()
    }
    out = {}
    names = sorted(reports)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            out[f"{a}|{b}"] = liddell_exact_test(gold, flat[a], flat[b])
    return out


def run_crossval(
    corpus: Corpus,
    configs: Sequence[str],
    k: int = 10,
    seed: int = 0,
    epochs: int = 10,
    window: int = 4,
    min_count: int = 2,
    resources: Optional[ExperimentResources] = None,
    workers: int = 1,
    labeler: str = "perceptron",
    alpha_n_perm: int = 10,
) -> dict[str, EvalReport]:
    """Ten-fold (by default) cross validation over a seeded random ordering of
    the whole corpus; one report per feature-set combination."""
    _require_gold(corpus.documents)
    ids = [doc.doc_id for doc in corpus.documents]
    if k > len(ids):
        raise ValueError(f"k={k} exceeds the {len(ids)} documents")
    rng = random.Random(derive_seed(seed, "cv-order"))
    rng.shuffle(ids)
    folds = _contiguous_folds(ids, k)

    reports: dict[str, EvalReport] = {}
    for config_digits in configs:
        FeatureConfig.from_string(config_digits)  # validate early
        tasks = []
        for fi, test_ids in enumerate(folds):
            train_ids = [i for fold in folds[:fi] + folds[fi + 1:] for i in fold]
            tasks.append(
                (fi, corpus, train_ids, test_ids, config_digits, window, min_count,
                 resources, epochs, seed, labeler)
            )
        predictions: dict[str, list[str]] = {}
        audits = []
        for _, fold_predictions, audit in _run_folds(tasks, workers):
            predictions.update(fold_predictions)
            audits.append(audit)
        reports[config_digits] = _assemble_report(
            corpus,
            predictions,
            metadata={
                "scenario": "all",
                "config": config_digits,
                "k": k,
                "seed": seed,
                "epochs": epochs,
                "window": window,
                "min_count": min_count,
                "labeler": labeler,
                "folds": audits,
            },
            alpha_n_perm=alpha_n_perm,
            alpha_seed=derive_seed(seed, "alpha", config_digits),
        )
    significance = _pairwise_significance(corpus, reports)
    for report in reports.values():
        report.metadata["significance"] = significance
    return reports


def _topics_present(corpus: Corpus) -> list[str]:
    present = {doc.topic for doc in corpus.documents}
    return [t for t in TOPICS if t in present]


def run_indomain(
    corpus: Corpus,
    configs: Sequence[str],
    k: int = 10,
    seed: int = 0,
    epochs: int = 10,
    window: int = 4,
    min_count: int = 2,
    resources: Optional[ExperimentResources] = None,
    workers: int = 1,
    labeler: str = "perceptron",
    alpha_n_perm: int = 10,
) -> dict:
    """Cross validation within each topic; the aggregated row is recomputed
    from the summed confusion matrix, not from averaged scores."""
    _require_gold(corpus.documents)
    per_topic: dict[str, dict[str, EvalReport]] = {}
    skipped = []
    for topic in _topics_present(corpus):
        docs = [d for d in corpus.documents if d.topic == topic]
        if len(docs) < k:
            skipped.append({"topic": topic, "reason": f"{len(docs)} documents < k={k}"})
            continue
        sub = Corpus(name=corpus.name, version=corpus.version, documents=tuple(docs))
        topic_reports = run_crossval(
            sub, configs, k=k, seed=seed, epochs=epochs,
            window=window, min_count=min_count, resources=resources, workers=workers,
            labeler=labeler, alpha_n_perm=alpha_n_perm,
        )
        for report in topic_reports.values():
            report.metadata["scenario"] = "in-domain"
            report.metadata["topic"] = topic
        per_topic[topic] = topic_reports

    aggregated = _aggregate_reports(corpus, per_topic, configs, "in-domain", seed, alpha_n_perm)
    return {"per_topic": per_topic, "aggregated": aggregated, "skipped_topics": skipped}


def run_crossdomain(
    corpus: Corpus,
    configs: Sequence[str],
    seed: int = 0,
    epochs: int = 10,
    window: int = 4,
    min_count: int = 2,
    resources: Optional[ExperimentResources] = None,
    workers: int = 1,
    labeler: str = "perceptron",
    alpha_n_perm: int = 10,
) -> dict:
    """Train on all topics but one and test on the held-out topic; resources
    are fitted on the training topics only."""
    _require_gold(corpus.documents)
    topics = _topics_present(corpus)
    if len(topics) < 2:
        raise ValueError("cross-domain evaluation needs at least 2 topics")

    per_topic: dict[str, dict[str, EvalReport]] = {}
    for topic in topics:
        test_ids = [d.doc_id for d in corpus.documents if d.topic == topic]
        train_ids = [d.doc_id for d in corpus.documents if d.topic != topic]
        topic_reports = {}
        for config_digits in configs:
            FeatureConfig.from_string(config_digits)
            task = (
                0, corpus, train_ids, test_ids, config_digits, window, min_count,
                resources, epochs, derive_seed(seed, "crossdomain", topic), labeler,
            )
            _, predictions, audit = _fold_task(task)
            topic_reports[config_digits] = _assemble_report(
                corpus,
                predictions,
                metadata={
                    "scenario": "cross-domain",
                    "topic": topic,
                    "config": config_digits,
                    "seed": seed,
                    "epochs": epochs,
                    "window": window,
                    "min_count": min_count,
                    "labeler": labeler,
                    "folds": [audit],
                },
                alpha_n_perm=alpha_n_perm,
                alpha_seed=derive_seed(seed, "alpha", "cross-domain", topic, config_digits),
            )
        per_topic[topic] = topic_reports

    aggregated = _aggregate_reports(corpus, per_topic, configs, "cross-domain", seed, alpha_n_perm)
    return {"per_topic": per_topic, "aggregated": aggregated}


def _aggregate_reports(
    corpus: Corpus,
    per_topic: Mapping[str, Mapping[str, EvalReport]],
    configs: Sequence[str],
    scenario: str,
    seed: int,
    alpha_n_perm: int,
) -> dict[str, EvalReport]:
    aggregated = {}
    for config_digits in configs:
        predictions: dict[str, list[str]] = {}
        parts = []
        for topic, reports in per_topic.items():
            if config_digits in reports:
                predictions.update(reports[config_digits].predictions)
                parts.append(topic)
        if not predictions:
            continue
        aggregated[config_digits] = _assemble_report(
            corpus,
            predictions,
            metadata={
                "scenario": scenario,
                "config": config_digits,
                "aggregated_over": parts,
                "seed": seed,
            },
            alpha_n_perm=alpha_n_perm,
            alpha_seed=derive_seed(seed, "alpha", scenario, "aggregated", config_digits),
        )
    if len(aggregated) >= 2:
        significance = _pairwise_significance(corpus, aggregated)
        for report in aggregated.values():
            report.metadata["significance"] = significance
    return aggregated


def human_performance(corpus: Corpus) -> Optional[EvalReport]:
    """Cumulative annotator-vs-gold scores over every annotation set, the
    human row of the summary table; None when no document has annotator sets
    alongside gold."""
    gold_tokens: list[str] = []
    human_tokens: list[str] = []
    doc_entries = []
    boundary_scores = []
    for doc in corpus.documents:
        if doc.gold is None or not doc.annotations:
            continue
        gold = tokens_from_annotation(doc, doc.gold)
        for ann in doc.annotations:
            pred = tokens_from_annotation(doc, ann)
            gold_tokens.extend(gold)
            human_tokens.extend(pred)
            if doc.n_tokens > 0:
                doc_entries.append(
                    (
                        doc.n_tokens,
                        {
                            "gold": [
                                (s.first_token, s.last_token, s.component_type)
                                for s in doc.gold.spans_in_dimension("logos")
                            ],
                            "system": units_from_token_labels(pred),
                        },
                    )
                )
                boundary_scores.append(
                    boundary_similarity(
                        segmentation_from_labels(gold), segmentation_from_labels(pred)
                    )
                )
    if not gold_tokens:
        return None
    core = token_macro_f1(gold_tokens, human_tokens)
    try:
        alpha = permuted_alpha(doc_entries, JOINT_LOGOS, n_perm=10, seed=0)
    except Exception:
        alpha = None
    return EvalReport(
        core=core,
        prob_confusion=prob_confusion_view(core),
        alpha_u=alpha,
        boundary_similarity=(
            sum(boundary_scores) / len(boundary_scores) if boundary_scores else None
        ),
        metadata={"scenario": "human"},
    )

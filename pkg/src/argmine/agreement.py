"""Annotation-reliability and disagreement-diagnostic metrics.

The central measure is the unitized agreement coefficient for annotations that
pick both segment boundaries and labels over a token continuum.  Observed
disagreement sums, over every ordered annotator pair and every intersecting
pair of sections, a squared distance: intersecting units of one category
contribute the squared begin- and end-offset differences, and a unit lying
wholly inside the other annotator's gap contributes its squared length.
Expected disagreement is the exact expectation of the same sum when every
unit is independently relocated uniformly at random on the continuum.  The
coefficient is 1 - D_o/D_e, so identical unitizations score exactly 1 and
independent random ones score near 0.

Because both sums depend only on unit lengths, within-document geometry, and
the continuum length, concatenating documents in different orders does not
change the value; the corpus-level protocol still averages over seeded random
concatenations so the reported standard error makes that explicit.
"""

from __future__ import annotations

import math
import random
import statistics as _stats
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .corpus import Corpus, Document, LOGOS_TYPES
from .errors import DegenerateDataError
from .util import derive_seed

JOINT_LOGOS = tuple(LOGOS_TYPES)


@dataclass(frozen=True)
class Continuum:
    """A token continuum with per-annotator categorized units.

    Units are (first_token, last_token, category) with inclusive bounds; gaps
    are implicitly uncategorized.
    """

    length: int
    units: Mapping[str, tuple[tuple[int, int, str], ...]]

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("continuum length must be positive")
        for annotator, units in self.units.items():
            spans = sorted((u[0], u[1]) for u in units)
            for first, last in spans:
                if not (0 <= first <= last < self.length):
                    raise ValueError(
                        f"unit {first}..{last} of '{annotator}' outside continuum of length {self.length}"
                    )
            for (f1, l1), (f2, l2) in zip(spans, spans[1:]):
                if f2 <= l1:
                    raise ValueError(f"overlapping units for annotator '{annotator}'")


@dataclass(frozen=True)
class AgreementResult:
    value: float
    n_permutations: int
    std_error: float


def _category_units(continuum: Continuum, annotator: str, category: str) -> list[tuple[int, int]]:
    """Half-open (begin, end) intervals of one annotator's units of a category."""
    out = [(f, l + 1) for f, l, c in continuum.units.get(annotator, ()) if c == category]
    out.sort()
    return out


def _observed_pair(units_i: Sequence[tuple[int, int]], units_j: Sequence[tuple[int, int]]) -> float:
    """Disagreement between two annotators' unit lists of one category.

    Intersecting unit pairs contribute (db)^2 + (de)^2; a unit that intersects
    none of the other annotator's units sits inside a gap and contributes its
    squared length.  Unit lists must be sorted and non-overlapping.
    """
    total = 0.0
    hit_j = [False] * len(units_j)
    k0 = 0
    for b, e in units_i:
        while k0 < len(units_j) and units_j[k0][1] <= b:
            k0 += 1
        k = k0
        hit = False
        while k < len(units_j) and units_j[k][0] < e:
            bb, ee = units_j[k]
            total += float(b - bb) ** 2 + float(e - ee) ** 2
            hit = True
            hit_j[k] = True
            k += 1
        if not hit:
            total += float(e - b) ** 2
    for (bb, ee), h in zip(units_j, hit_j):
        if not h:
            total += float(ee - bb) ** 2
    return total


@lru_cache(maxsize=100_000)
def _expected_intersecting(length: int, a: int, b: int) -> float:
    """E[(db)^2 + (de)^2 over intersecting placements] x P(intersect) for one
    unit pair of lengths a and b placed independently and uniformly."""
    n_a = length - a + 1
    n_b = length - b + 1
    # offsets d = s - t with intersection iff -a < d < b
    d = np.arange(-(a - 1), b, dtype=np.float64)
    cnt = np.minimum(length - a, length - b + d) - np.maximum(0.0, d) + 1.0
    cnt = np.maximum(cnt, 0.0)
    delta = d * d + (d + a - b) ** 2
    return float(np.dot(cnt, delta)) / (n_a * n_b)


@lru_cache(maxsize=100_000)
def _prob_miss_all(length: int, a: int, other_lengths: tuple[tuple[int, int], ...]) -> float:
    """Probability that a length-a unit placed uniformly misses every unit of
    the other annotator (lengths given as sorted (length, count) pairs), all
    placements independent and uniform."""
    n_a = length - a + 1
    s = np.arange(n_a, dtype=np.float64)
    prob = np.ones(n_a, dtype=np.float64)
    for b, count in other_lengths:
        n_b = length - b + 1
        hits = np.minimum(length - b, s + a - 1) - np.maximum(0.0, s - b + 1) + 1.0
        hits = np.clip(hits, 0.0, n_b)
        prob *= ((n_b - hits) / n_b) ** count
    return float(prob.sum()) / n_a


def _expected_pair(
    length: int, lengths_i: Counter, lengths_j: Counter
) -> float:
    """Expectation of `_observed_pair` under independent uniform relocation."""
    total = 0.0
    for a, ca in lengths_i.items():
        for b, cb in lengths_j.items():
            total += ca * cb * _expected_intersecting(length, a, b)
    key_j = tuple(sorted(lengths_j.items()))
    key_i = tuple(sorted(lengths_i.items()))
    for a, ca in lengths_i.items():
        total += ca * float(a) ** 2 * _prob_miss_all(length, a, key_j)
    for b, cb in lengths_j.items():
        total += cb * float(b) ** 2 * _prob_miss_all(length, b, key_i)
    return total


def alpha_u(continuum: Continuum, category: str | Sequence[str]) -> float:
    """Unitized agreement for one category, or jointly for a category set.

    The joint value pools the observed and expected disagreement sums over all
    listed categories before taking the ratio.
    """
    categories = [category] if isinstance(category, str) else list(category)
    annotators = sorted(continuum.units.keys())
    if len(annotators) < 2:
        raise DegenerateDataError("unitized agreement needs at least 2 annotators")

    length = continuum.length
    d_obs = 0.0
    d_exp = 0.0
    for cat in categories:
        per_annotator = {a: _category_units(continuum, a, cat) for a in annotators}
        lengths = {a: Counter(e - b for b, e in units) for a, units in per_annotator.items()}
        for idx, i in enumerate(annotators):
            for j in annotators[idx + 1:]:
                d_obs += 2.0 * _observed_pair(per_annotator[i], per_annotator[j])
                d_exp += 2.0 * _expected_pair(length, lengths[i], lengths[j])
    if d_exp == 0.0:
        raise DegenerateDataError(
            "expected disagreement is zero; unitized agreement is undefined on this continuum"
        )
    if d_obs == 0.0:
        return 1.0
    return 1.0 - d_obs / d_exp


def units_from_annotations(
    doc: Document,
    annotator_ids: Sequence[str],
    dimension: str = "logos",
    include_gold: bool = True,
) -> dict[str, list[tuple[int, int, str]]]:
    """Per-annotator (first, last, category) units of one document."""
    available = {a.annotator_id: a for a in doc.annotations}
    if include_gold and doc.gold is not None:
        available.setdefault(doc.gold.annotator_id, doc.gold)
    out = {}
    for annotator in annotator_ids:
        ann = available.get(annotator)
        if ann is None:
            continue
        out[annotator] = [
            (s.first_token, s.last_token, s.component_type)
            for s in ann.spans_in_dimension(dimension)
        ]
    return out


def document_continuum(
    doc: Document, annotator_ids: Sequence[str], dimension: str = "logos"
) -> Continuum:
    units = units_from_annotations(doc, annotator_ids, dimension)
    return Continuum(length=max(doc.n_tokens, 1), units={a: tuple(u) for a, u in units.items()})


def permuted_alpha(
    doc_entries: Sequence[tuple[int, Mapping[str, Sequence[tuple[int, int, str]]]]],
    category: str | Sequence[str],
    n_perm: int = 100,
    seed: int = 0,
) -> AgreementResult:
    """Concatenate per-document continua in seeded random orders, compute the
    unitized agreement on each concatenation, and report mean and the spread
    across orders.  ``doc_entries`` holds (length, units-by-annotator) pairs."""
    if n_perm < 1:
        raise ValueError("n_perm must be >= 1")
    if not doc_entries:
        raise DegenerateDataError("no documents to concatenate")
    annotators = sorted({a for _, units in doc_entries for a in units})

    values = []
    for p in range(n_perm):
        rng = random.Random(derive_seed(seed, "corpus-alpha-u", p))
        order = list(range(len(doc_entries)))
        rng.shuffle(order)
        offset = 0
        merged: dict[str, list[tuple[int, int, str]]] = {a: [] for a in annotators}
        for di in order:
            length, units = doc_entries[di]
            for a in annotators:
                merged[a].extend(
                    (first + offset, last + offset, cat)
                    for first, last, cat in units.get(a, ())
                )
            offset += length
        continuum = Continuum(length=offset, units={a: tuple(u) for a, u in merged.items()})
        values.append(alpha_u(continuum, category))
    return AgreementResult(
        value=float(_stats.fmean(values)),
        n_permutations=n_perm,
        std_error=float(_stats.pstdev(values)) if len(values) > 1 else 0.0,
    )


def corpus_alpha_u(
    corpus: Corpus,
    annotators: Sequence[str],
    category: str | Sequence[str],
    n_perm: int = 100,
    seed: int = 0,
    dimension: str = "logos",
) -> AgreementResult:
    """Treat the whole corpus as one continuum of concatenated documents; only
    documents carrying all requested annotators participate."""
    doc_entries = []
    for doc in corpus.documents:
        if doc.n_tokens == 0:
            continue
        units = units_from_annotations(doc, annotators, dimension)
        if all(a in units for a in annotators):
            doc_entries.append((doc.n_tokens, units))
    if not doc_entries:
        raise DegenerateDataError("no document carries all requested annotators")
    return permuted_alpha(doc_entries, category, n_perm=n_perm, seed=seed)


# ---------------------------------------------------------------------------
# Fleiss' kappa

def fleiss_kappa(items: Sequence[Sequence[str]]) -> float:
    """Chance-corrected agreement for nominal ratings with a fixed rater count
    per item.  ``items`` holds one label per rater for each item."""
    if not items:
        raise ValueError("no items")
    r = len(items[0])
    if r < 2:
        raise ValueError("each item needs at least 2 ratings")
    for i, votes in enumerate(items):
        if len(votes) != r:
            raise ValueError(f"item {i} has {len(votes)} ratings, expected {r}")

    categories = sorted({v for votes in items for v in votes})
    n = len(items)
    totals = Counter()
    p_bar = 0.0
    for votes in items:
        counts = Counter(votes)
        totals.update(counts)
        p_bar += sum(c * (c - 1) for c in counts.values()) / (r * (r - 1))
    p_bar /= n
    p_exp = sum((totals[c] / (n * r)) ** 2 for c in categories)
    if p_exp >= 1.0:
        raise DegenerateDataError("all ratings fall in a single category; kappa is undefined")
    return (p_bar - p_exp) / (1.0 - p_exp)


# ---------------------------------------------------------------------------
# Probabilistic confusion matrix

def _annotator_token_labels(doc: Document, annotator: str, labels: Sequence[str]) -> Optional[list[str]]:
    available = {a.annotator_id: a for a in doc.annotations}
    if doc.gold is not None:
        available.setdefault(doc.gold.annotator_id, doc.gold)
    ann = available.get(annotator)
    if ann is None:
        return None
    out = ["none"] * doc.n_tokens
    for span in ann.spans:
        if span.component_type in labels:
            for t in range(span.first_token, span.last_token + 1):
                out[t] = span.component_type
    return out


def prob_confusion_matrix(
    corpus: Corpus,
    annotators: Sequence[str],
    labels: Sequence[str] = LOGOS_TYPES + ("none",),
) -> dict[str, dict[str, float]]:
    """Row j holds the probability of another annotator assigning each label
    given one annotator chose j, pooled over all annotator pairs and tokens.
    Rows of labels never used are absent."""
    if len(annotators) < 2:
        raise ValueError("need at least 2 annotators")
    counts = {j: Counter() for j in labels}
    for doc in corpus.documents:
        assigned = {
            a: lab
            for a in annotators
            if (lab := _annotator_token_labels(doc, a, labels)) is not None
        }
        present = sorted(assigned)
        for i_idx, i in enumerate(present):
            for j in present[i_idx + 1:]:
                for la, lb in zip(assigned[i], assigned[j]):
                    counts[la][lb] += 1
                    counts[lb][la] += 1
    matrix = {}
    for j in labels:
        total = sum(counts[j].values())
        if total == 0:
            continue
        matrix[j] = {k: counts[j][k] / total for k in labels}
    return matrix


def confusion_rows_from_pairs(
    pairs: Iterable[tuple[str, str]], labels: Sequence[str]
) -> dict[str, dict[str, float]]:
    """Row-normalized label confusion from (row_label, col_label) pairs."""
    counts = {j: Counter() for j in labels}
    for row, col in pairs:
        counts[row][col] += 1
    out = {}
    for j in labels:
        total = sum(counts[j].values())
        if total == 0:
            continue
        out[j] = {k: counts[j][k] / total for k in labels}
    return out


# ---------------------------------------------------------------------------
# Readability

_VOWELS = set("aeiouy")


def count_syllables(word: str) -> int:
    """Maximal vowel groups, dropping a word-final 'e' group unless that would
    leave zero; at least one syllable per word."""
    letters = [c for c in word.lower() if c.isalpha()]
    if not letters:
        return 1
    groups = 0
    prev_vowel = False
    for c in letters:
        vowel = c in _VOWELS
        if vowel and not prev_vowel:
            groups += 1
        prev_vowel = vowel
    if letters[-1] == "e" and groups > 1:
        groups -= 1
    return max(groups, 1)


def _span_text(text: str, item) -> str:
    if isinstance(item, tuple):
        return text[item[0]:item[1]]
    return text[item.start:item.end]


def readability(text: str, tokens: Sequence, sentences: Sequence) -> dict[str, float]:
    """Automated readability index, Coleman-Liau, Flesch reading ease, and Lix.

    Words are tokens containing at least one alphanumeric character; letters
    are Unicode alphabetic characters; the character count feeding the ARI is
    letters plus digits; Lix long words have more than 6 letters.
    """
    n_sentences = len(sentences)
    words = []
    for t in tokens:
        w = _span_text(text, t)
        if any(c.isalnum() for c in w):
            words.append(w)
    n_words = len(words)
    if n_sentences == 0 or n_words == 0:
        raise ValueError("readability undefined without at least one sentence and one word")

    n_letters = sum(1 for w in words for c in w if c.isalpha())
    n_chars = sum(1 for w in words for c in w if c.isalnum())
    n_syllables = sum(count_syllables(w) for w in words)
    n_long = sum(1 for w in words if sum(1 for c in w if c.isalpha()) > 6)

    ari = 4.71 * (n_chars / n_words) + 0.5 * (n_words / n_sentences) - 21.43
    coleman_liau = 0.0588 * (100.0 * n_letters / n_words) - 0.296 * (100.0 * n_sentences / n_words) - 15.8
    flesch = 206.835 - 1.015 * (n_words / n_sentences) - 84.6 * (n_syllables / n_words)
    lix = (n_words / n_sentences) + 100.0 * (n_long / n_words)
    return {"ari": ari, "coleman_liau": coleman_liau, "flesch": flesch, "lix": lix}


# ---------------------------------------------------------------------------
# Correlation diagnostics

def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    if len(x) != len(y):
        raise ValueError("sequences must have equal length")
    if len(x) < 3:
        raise ValueError("need at least 3 points")
    mx = _stats.fmean(x)
    my = _stats.fmean(y)
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateDataError("zero variance; correlation undefined")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return sxy / math.sqrt(sxx * syy)


def sentence_coverage_ratio(doc: Document) -> Optional[float]:
    """Fraction of annotated component boundaries aligned to sentence boundaries."""
    starts = {rng[0] for s in doc.sentences if (rng := s.token_range) is not None}
    ends = {rng[1] for s in doc.sentences if (rng := s.token_range) is not None}
    aligned = 0
    total = 0
    for ann in doc.annotations:
        for span in ann.spans_in_dimension("logos"):
            total += 2
            aligned += span.first_token in starts
            aligned += span.last_token in ends
    if total == 0:
        return None
    return aligned / total


def _document_measures(doc: Document) -> Optional[dict[str, float]]:
    coverage = sentence_coverage_ratio(doc)
    if coverage is None:
        return None
    try:
        scores = readability(doc.text, doc.tokens, doc.sentences)
    except ValueError:
        return None
    n_paragraph_tokens = [
        sum(1 for t in doc.tokens if p.start <= t.start and t.end <= p.end)
        for p in doc.paragraphs
    ]
    n_sentence_tokens = [len(doc.sentence_tokens(k)) for k in range(doc.n_sentences)]
    return {
        "sentence_coverage": coverage,
        "document_length": float(doc.n_tokens),
        "avg_paragraph_length": float(_stats.fmean(n_paragraph_tokens)) if n_paragraph_tokens else 0.0,
        "avg_sentence_length": float(_stats.fmean(n_sentence_tokens)) if n_sentence_tokens else 0.0,
        **scores,
    }


CORRELATE_MEASURES = (
    "sentence_coverage",
    "document_length",
    "avg_paragraph_length",
    "avg_sentence_length",
    "ari",
    "coleman_liau",
    "flesch",
    "lix",
)


def disagreement_correlates(
    corpus: Corpus,
    topic: Optional[str] = None,
    register: Optional[str] = None,
) -> dict:
    """Correlation of per-document unitized agreement (joint over the five
    logos components) with coverage, length, and readability measures."""
    docs = [
        doc
        for doc in corpus.documents
        if (topic is None or doc.topic == topic)
        and (register is None or doc.register == register)
    ]
    if not docs:
        raise ValueError("subset filter matches no document")

    rows = []
    skipped = 0
    for doc in docs:
        annotators = [a.annotator_id for a in doc.annotations]
        measures = _document_measures(doc)
        if len(annotators) < 2 or measures is None:
            skipped += 1
            continue
        try:
            value = alpha_u(document_continuum(doc, annotators), JOINT_LOGOS)
        except DegenerateDataError:
            skipped += 1
            continue
        rows.append((measures, value))

    correlations = {}
    alphas = [v for _, v in rows]
    for measure in CORRELATE_MEASURES:
        xs = [m[measure] for m, _ in rows]
        try:
            correlations[measure] = {"r": pearson_r(xs, alphas)}
        except (ValueError, DegenerateDataError) as exc:
            correlations[measure] = {"error": str(exc)}
    return {
        "subset": {"topic": topic, "register": register},
        "n_documents": len(rows),
        "n_skipped": skipped,
        "correlations": correlations,
    }

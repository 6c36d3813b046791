"""Sentence-level approximation of token spans and the 11-class BIO label scheme.

Token spans are projected to one label per sentence (the component with the
most tokens inside the sentence wins), predictions are made per sentence, and
labels are expanded back to tokens for scoring.  The oracle quantifies the
loss introduced by this approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .corpus import AnnotationSet, Corpus, Document

# Fixed label order; index 0 is the decoding tie-break winner.
BIO_LABELS: tuple[str, ...] = (
    "O",
    "Claim-B",
    "Claim-I",
    "Premise-B",
    "Premise-I",
    "Backing-B",
    "Backing-I",
    "Rebuttal-B",
    "Rebuttal-I",
    "Refutation-B",
    "Refutation-I",
)

LABEL_INDEX = {label: i for i, label in enumerate(BIO_LABELS)}

_STEM = {
    "claim": "Claim",
    "premise": "Premise",
    "backing": "Backing",
    "rebuttal": "Rebuttal",
    "refutation": "Refutation",
}


def begin_label(component_type: str) -> str:
    return f"{_STEM[component_type]}-B"


def inside_label(component_type: str) -> str:
    return f"{_STEM[component_type]}-I"


def component_of(label: str) -> Optional[str]:
    """Component stem of a label ('Claim', ...), or None for O."""
    if label == "O":
        return None
    return label[:-2]


def is_begin(label: str) -> bool:
    return label.endswith("-B")


@dataclass(frozen=True)
class SentenceLabeling:
    doc_id: str
    labels: tuple[str, ...]


def sentence_approximate(doc: Document, annotation: AnnotationSet) -> SentenceLabeling:
    """One BIO label per sentence: the logos component with the most tokens in
    the sentence wins (ties go to the earliest-starting component); the label
    is *-B iff the winning component starts in this sentence."""
    spans = annotation.spans_in_dimension("logos")
    labels = []
    for k in range(doc.n_sentences):
        rng = doc.sentences[k].token_range
        if rng is None:
            labels.append("O")
            continue
        first, last = rng
        best = None
        best_count = 0
        for span in spans:
            inside = min(last, span.last_token) - max(first, span.first_token) + 1
            if inside <= 0:
                continue
            if inside > best_count or (inside == best_count and best is not None
                                       and span.first_token < best.first_token):
                best = span
                best_count = inside
        if best is None:
            labels.append("O")
        elif first <= best.first_token <= last:
            labels.append(begin_label(best.component_type))
        else:
            labels.append(inside_label(best.component_type))
    return SentenceLabeling(doc_id=doc.doc_id, labels=tuple(labels))


def expand_to_tokens(doc: Document, labeling: SentenceLabeling) -> list[str]:
    """Spread sentence labels over their tokens; a *-B sentence yields *-B on
    the first token and *-I on the rest."""
    if len(labeling.labels) != doc.n_sentences:
        raise ValueError(
            f"labeling length {len(labeling.labels)} != sentence count {doc.n_sentences}"
        )
    out = ["O"] * doc.n_tokens
    for k, label in enumerate(labeling.labels):
        tokens = list(doc.sentence_tokens(k))
        if not tokens or label == "O":
            continue
        stem = component_of(label)
        if is_begin(label):
            out[tokens[0]] = f"{stem}-B"
            for t in tokens[1:]:
                out[t] = f"{stem}-I"
        else:
            for t in tokens:
                out[t] = f"{stem}-I"
    return out


def tokens_from_annotation(doc: Document, annotation: AnnotationSet) -> list[str]:
    """Direct token-level BIO labels of the logos spans."""
    out = ["O"] * doc.n_tokens
    for span in annotation.spans_in_dimension("logos"):
        out[span.first_token] = begin_label(span.component_type)
        for t in range(span.first_token + 1, span.last_token + 1):
            out[t] = inside_label(span.component_type)
    return out


def oracle_eval(corpus: Corpus):
    """Score the sentence approximation of the gold annotations against the
    token-level gold labels: the ceiling of any sentence-based labeler."""
    from .evaluation import token_macro_f1  # local import avoids a cycle

    gold_tokens: list[str] = []
    approx_tokens: list[str] = []
    for doc in corpus.documents:
        if doc.gold is None:
            raise ValueError(f"document '{doc.doc_id}' has no gold annotations")
        gold_tokens.extend(tokens_from_annotation(doc, doc.gold))
        approx_tokens.extend(expand_to_tokens(doc, sentence_approximate(doc, doc.gold)))
    return token_macro_f1(gold_tokens, approx_tokens)


# ---------------------------------------------------------------------------
# Token-label dump format: TSV with doc_id, token_index, gold_label, predicted_label

TSV_HEADER = "doc_id\ttoken_index\tgold_label\tpredicted_label"


def write_token_labels_tsv(
    path: str | Path, rows: Iterable[tuple[str, int, str, str]]
) -> None:
    lines = [TSV_HEADER]
    lines.extend(f"{doc_id}\t{index}\t{gold}\t{pred}" for doc_id, index, gold, pred in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_token_labels_tsv(path: str | Path) -> list[tuple[str, int, str, str]]:
    rows = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        if not line or (i == 0 and line == TSV_HEADER):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"line {i + 1}: expected 4 tab-separated columns")
        doc_id, index, gold, pred = parts
        rows.append((doc_id, int(index), gold, pred))
    return rows

"""Document/annotation data model, corpus file format, validation, and gold construction.

A corpus file is UTF-8 JSON with top level ``{"name", "version", "documents"}``.
Character offsets are Unicode scalar-value offsets into the document text.
All types are immutable after construction, so corpora can be shared freely
across worker processes.
"""

from __future__ import annotations

import json
import statistics as _stats
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    CorpusParseError,
    CorpusSchemaError,
    CorpusValidationError,
    GoldConstructionError,
)

TOPICS = (
    "homeschooling",
    "mainstreaming",
    "prayer-in-schools",
    "public-private-schools",
    "redshirting",
    "single-sex-education",
)

REGISTERS = ("comment", "forumpost", "blogpost", "article")

LOGOS_TYPES = ("claim", "premise", "backing", "rebuttal", "refutation")
PATHOS_TYPES = ("appeal_to_emotion",)
COMPONENT_TYPES = LOGOS_TYPES + PATHOS_TYPES
DIMENSIONS = ("logos", "pathos")

GOLD_ANNOTATOR_ID = "gold"


@dataclass(frozen=True)
class Token:
    start: int
    end: int
    index: int


@dataclass(frozen=True)
class Sentence:
    start: int
    end: int
    # (first token index, last token index), inclusive; None for a token-less sentence
    token_range: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class Paragraph:
    start: int
    end: int


@dataclass(frozen=True)
class ComponentSpan:
    component_type: str
    dimension: str
    first_token: int
    last_token: int
    summary: Optional[str] = None
    implicit: bool = False


@dataclass(frozen=True)
class AnnotationSet:
    annotator_id: str
    spans: tuple[ComponentSpan, ...]
    implicit_claim_stance: Optional[str] = None

    def spans_in_dimension(self, dimension: str) -> tuple[ComponentSpan, ...]:
        return tuple(s for s in self.spans if s.dimension == dimension)


@dataclass(frozen=True)
class PersuasiveLabel:
    label: bool
    votes: tuple[tuple[str, bool], ...] = ()

    def votes_dict(self) -> dict[str, bool]:
        return dict(self.votes)


@dataclass(frozen=True)
class Document:
    doc_id: str
    topic: str
    register: str
    text: str
    paragraphs: tuple[Paragraph, ...]
    sentences: tuple[Sentence, ...]
    tokens: tuple[Token, ...]
    annotations: tuple[AnnotationSet, ...] = ()
    gold: Optional[AnnotationSet] = None
    persuasive: Optional[PersuasiveLabel] = None

    @property
    def n_tokens(self) -> int:
        return len(self.tokens)

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    def token_text(self, index: int) -> str:
        tok = self.tokens[index]
        return self.text[tok.start:tok.end]

    def sentence_tokens(self, sent_index: int) -> range:
        """Token indices of one sentence (empty range for a token-less sentence)."""
        rng = self.sentences[sent_index].token_range
        if rng is None:
            return range(0)
        return range(rng[0], rng[1] + 1)

    def sentence_index_of_token(self, token_index: int) -> int:
        for i, sent in enumerate(self.sentences):
            rng = sent.token_range
            if rng is not None and rng[0] <= token_index <= rng[1]:
                return i
        raise IndexError(f"token {token_index} lies in no sentence")

    def paragraph_index_of_sentence(self, sent_index: int) -> int:
        sent = self.sentences[sent_index]
        for i, par in enumerate(self.paragraphs):
            if par.start <= sent.start and sent.end <= par.end:
                return i
        raise IndexError(f"sentence {sent_index} lies in no paragraph")


@dataclass(frozen=True)
class Corpus:
    name: str
    version: str
    documents: tuple[Document, ...]

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc
        raise KeyError(doc_id)


@dataclass(frozen=True)
class Finding:
    """One validation finding; severity is 'error' or 'warning'."""

    severity: str
    doc_id: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.severity}] {self.doc_id}: {self.where}: {self.message}"


@dataclass(frozen=True)
class UnresolvedRegion:
    """Token range with no strict-majority label; flagged for manual curation."""

    dimension: str
    first_token: int
    last_token: int


def build_document(
    doc_id: str,
    topic: str,
    register: str,
    text: str,
    paragraphs: Sequence[tuple[int, int]],
    sentences: Sequence[tuple[int, int]],
    tokens: Sequence[tuple[int, int]],
    annotations: Sequence[AnnotationSet] = (),
    gold: Optional[AnnotationSet] = None,
    persuasive: Optional[PersuasiveLabel] = None,
) -> Document:
    """Construct a Document from raw offset pairs, deriving token indices and
    per-sentence token ranges."""
    token_objs = tuple(Token(start=s, end=e, index=i) for i, (s, e) in enumerate(tokens))
    sentence_objs = []
    for s, e in sentences:
        inside = [t.index for t in token_objs if t.start >= s and t.end <= e]
        rng = (inside[0], inside[-1]) if inside else None
        sentence_objs.append(Sentence(start=s, end=e, token_range=rng))
    return Document(
        doc_id=doc_id,
        topic=topic,
        register=register,
        text=text,
        paragraphs=tuple(Paragraph(start=s, end=e) for s, e in paragraphs),
        sentences=tuple(sentence_objs),
        tokens=token_objs,
        annotations=tuple(annotations),
        gold=gold,
        persuasive=persuasive,
    )


# ---------------------------------------------------------------------------
# Parsing

def _require(mapping, key, kind, doc_id, field_path):
    if key not in mapping:
        raise CorpusSchemaError(f"missing key '{key}'", doc_id=doc_id, field=field_path)
    value = mapping[key]
    if kind is int and isinstance(value, bool):
        raise CorpusSchemaError(f"'{key}' must be an integer", doc_id=doc_id, field=field_path)
    if not isinstance(value, kind):
        raise CorpusSchemaError(
            f"'{key}' must be {getattr(kind, '__name__', kind)}", doc_id=doc_id, field=field_path
        )
    return value


def _parse_offsets(items, doc_id, field_path) -> list[tuple[int, int]]:
    out = []
    for i, item in enumerate(items):
        where = f"{field_path}[{i}]"
        if not isinstance(item, dict):
            raise CorpusSchemaError("offset entry must be an object", doc_id=doc_id, field=where)
        start = _require(item, "start", int, doc_id, where)
        end = _require(item, "end", int, doc_id, where)
        out.append((start, end))
    return out


def _parse_annotation_set(obj, doc_id, field_path, n_tokens) -> AnnotationSet:
    if not isinstance(obj, dict):
        raise CorpusSchemaError("annotation set must be an object", doc_id=doc_id, field=field_path)
    annotator = _require(obj, "annotator", str, doc_id, field_path)
    raw_spans = _require(obj, "spans", list, doc_id, field_path)
    spans = []
    for i, raw in enumerate(raw_spans):
        where = f"{field_path}.spans[{i}]"
        if not isinstance(raw, dict):
            raise CorpusSchemaError("span must be an object", doc_id=doc_id, field=where)
        ctype = _require(raw, "type", str, doc_id, where)
        dimension = _require(raw, "dimension", str, doc_id, where)
        first = _require(raw, "first_token", int, doc_id, where)
        last = _require(raw, "last_token", int, doc_id, where)
        if ctype not in COMPONENT_TYPES:
            raise CorpusSchemaError(f"unknown component type '{ctype}'", doc_id=doc_id, field=where)
        if dimension not in DIMENSIONS:
            raise CorpusSchemaError(f"unknown dimension '{dimension}'", doc_id=doc_id, field=where)
        if not (0 <= first <= last):
            raise CorpusSchemaError(
                f"invalid token range {first}..{last}", doc_id=doc_id, field=where
            )
        if last >= n_tokens:
            raise CorpusSchemaError(
                f"span {first}..{last} exceeds token count {n_tokens}", doc_id=doc_id, field=where
            )
        summary = raw.get("summary")
        if summary is not None and not isinstance(summary, str):
            raise CorpusSchemaError("'summary' must be a string", doc_id=doc_id, field=where)
        implicit = raw.get("implicit", False)
        if not isinstance(implicit, bool):
            raise CorpusSchemaError("'implicit' must be a boolean", doc_id=doc_id, field=where)
        spans.append(
            ComponentSpan(
                component_type=ctype,
                dimension=dimension,
                first_token=first,
                last_token=last,
                summary=summary,
                implicit=implicit,
            )
        )
    stance = obj.get("implicit_claim_stance")
    if stance is not None and not isinstance(stance, str):
        raise CorpusSchemaError(
            "'implicit_claim_stance' must be a string", doc_id=doc_id, field=field_path
        )
    return AnnotationSet(annotator_id=annotator, spans=tuple(spans), implicit_claim_stance=stance)


def _parse_document(obj) -> Document:
    if not isinstance(obj, dict):
        raise CorpusSchemaError("document must be an object")
    doc_id = _require(obj, "id", str, None, "id")
    topic = _require(obj, "topic", str, doc_id, "topic")
    register = _require(obj, "register", str, doc_id, "register")
    text = _require(obj, "text", str, doc_id, "text")
    if topic not in TOPICS:
        raise CorpusSchemaError(f"unknown topic '{topic}'", doc_id=doc_id, field="topic")
    if register not in REGISTERS:
        raise CorpusSchemaError(f"unknown register '{register}'", doc_id=doc_id, field="register")

    paragraphs = _parse_offsets(_require(obj, "paragraphs", list, doc_id, "paragraphs"), doc_id, "paragraphs")
    sentences = _parse_offsets(_require(obj, "sentences", list, doc_id, "sentences"), doc_id, "sentences")
    tokens = _parse_offsets(_require(obj, "tokens", list, doc_id, "tokens"), doc_id, "tokens")

    n = len(text)
    for name, offsets in (("paragraphs", paragraphs), ("sentences", sentences), ("tokens", tokens)):
        for i, (s, e) in enumerate(offsets):
            if not (0 <= s < e <= n):
                raise CorpusSchemaError(
                    f"offsets {s}..{e} outside text of length {n}",
                    doc_id=doc_id,
                    field=f"{name}[{i}]",
                )

    annotations = []
    for i, raw in enumerate(_require(obj, "annotations", list, doc_id, "annotations")):
        annotations.append(_parse_annotation_set(raw, doc_id, f"annotations[{i}]", len(tokens)))

    gold = None
    if obj.get("gold") is not None:
        gold = _parse_annotation_set(obj["gold"], doc_id, "gold", len(tokens))

    persuasive = None
    if obj.get("persuasive") is not None:
        raw = obj["persuasive"]
        if not isinstance(raw, dict):
            raise CorpusSchemaError("'persuasive' must be an object", doc_id=doc_id, field="persuasive")
        label = _require(raw, "label", bool, doc_id, "persuasive")
        votes = raw.get("votes", {})
        if not isinstance(votes, dict) or not all(
            isinstance(k, str) and isinstance(v, bool) for k, v in votes.items()
        ):
            raise CorpusSchemaError(
                "'votes' must map annotator ids to booleans", doc_id=doc_id, field="persuasive.votes"
            )
        persuasive = PersuasiveLabel(label=label, votes=tuple(sorted(votes.items())))

    return build_document(
        doc_id=doc_id,
        topic=topic,
        register=register,
        text=text,
        paragraphs=paragraphs,
        sentences=sentences,
        tokens=tokens,
        annotations=annotations,
        gold=gold,
        persuasive=persuasive,
    )


def parse_corpus(path: str | Path, validate: bool = True) -> Corpus:
    """Parse a corpus file.

    With ``validate=True`` (the default) any error-severity finding raises
    :class:`CorpusValidationError`; warnings are tolerated.
    """
    raw = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(obj, dict):
        raise CorpusSchemaError("top level must be an object")
    name = _require(obj, "name", str, None, "name")
    version = _require(obj, "version", str, None, "version")
    documents = tuple(_parse_document(d) for d in _require(obj, "documents", list, None, "documents"))

    seen = set()
    for doc in documents:
        if doc.doc_id in seen:
            raise CorpusSchemaError("duplicate document id", doc_id=doc.doc_id, field="id")
        seen.add(doc.doc_id)

    corpus = Corpus(name=name, version=version, documents=documents)
    if validate:
        errors = [f for f in validate_corpus(corpus) if f.severity == "error"]
        if errors:
            raise CorpusValidationError(errors)
    return corpus


# ---------------------------------------------------------------------------
# Serialization

def _span_to_json(span: ComponentSpan) -> dict:
    out = {
        "type": span.component_type,
        "dimension": span.dimension,
        "first_token": span.first_token,
        "last_token": span.last_token,
    }
    if span.summary is not None:
        out["summary"] = span.summary
    if span.implicit:
        out["implicit"] = True
    return out


def _annotation_to_json(ann: AnnotationSet) -> dict:
    out = {"annotator": ann.annotator_id, "spans": [_span_to_json(s) for s in ann.spans]}
    if ann.implicit_claim_stance is not None:
        out["implicit_claim_stance"] = ann.implicit_claim_stance
    return out


def corpus_to_json(corpus: Corpus) -> dict:
    docs = []
    for doc in corpus.documents:
        entry = {
            "id": doc.doc_id,
            "topic": doc.topic,
            "register": doc.register,
            "text": doc.text,
            "paragraphs": [{"start": p.start, "end": p.end} for p in doc.paragraphs],
            "sentences": [{"start": s.start, "end": s.end} for s in doc.sentences],
            "tokens": [{"start": t.start, "end": t.end} for t in doc.tokens],
            "annotations": [_annotation_to_json(a) for a in doc.annotations],
        }
        if doc.gold is not None:
            entry["gold"] = _annotation_to_json(doc.gold)
        if doc.persuasive is not None:
            entry["persuasive"] = {
                "label": doc.persuasive.label,
                "votes": {k: v for k, v in doc.persuasive.votes},
            }
        docs.append(entry)
    return {"name": corpus.name, "version": corpus.version, "documents": docs}


def canonical_json(obj) -> str:
    """Canonical serialization: sorted keys, two-space indent, LF endings,
    trailing newline, shortest round-trip float formatting."""
    text = json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)
    return text + "\n"


def serialize_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical, byte-deterministic form of a corpus."""
    Path(path).write_text(canonical_json(corpus_to_json(corpus)), encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# Validation

def _validate_annotation_set(doc: Document, ann: AnnotationSet, where: str) -> list[Finding]:
    findings = []
    for i, span in enumerate(ann.spans):
        spot = f"{where}.spans[{i}]"
        if span.component_type in LOGOS_TYPES and span.dimension != "logos":
            findings.append(
                Finding("error", doc.doc_id, spot,
                        f"{span.component_type} must have dimension logos")
            )
        if span.component_type in PATHOS_TYPES and span.dimension != "pathos":
            findings.append(
                Finding("error", doc.doc_id, spot,
                        f"{span.component_type} must have dimension pathos")
            )
        if span.implicit and span.component_type != "claim":
            findings.append(
                Finding("error", doc.doc_id, spot, "implicit flag is valid only for claims")
            )
        if not (0 <= span.first_token <= span.last_token < doc.n_tokens):
            findings.append(
                Finding("error", doc.doc_id, spot,
                        f"token range {span.first_token}..{span.last_token} out of bounds")
            )
    for dimension in DIMENSIONS:
        spans = sorted(ann.spans_in_dimension(dimension), key=lambda s: s.first_token)
        for a, b in zip(spans, spans[1:]):
            if b.first_token <= a.last_token:
                findings.append(
                    Finding("error", doc.doc_id, where,
                            f"overlapping {dimension} spans at tokens "
                            f"{a.first_token}..{a.last_token} and {b.first_token}..{b.last_token}")
                )
    types = {s.component_type for s in ann.spans}
    if "refutation" in types and "rebuttal" not in types:
        findings.append(
            Finding("warning", doc.doc_id, where, "refutation without any rebuttal in the same set")
        )
    return findings


def validate_document(doc: Document) -> list[Finding]:
    """Check all document invariants; returns findings (empty iff fully valid)."""
    findings = []
    n = len(doc.text)

    if doc.topic not in TOPICS:
        findings.append(Finding("error", doc.doc_id, "topic", f"unknown topic '{doc.topic}'"))
    if doc.register not in REGISTERS:
        findings.append(Finding("error", doc.doc_id, "register", f"unknown register '{doc.register}'"))

    for name, items in (("paragraphs", doc.paragraphs), ("sentences", doc.sentences), ("tokens", doc.tokens)):
        for i, item in enumerate(items):
            if not (0 <= item.start < item.end <= n):
                findings.append(
                    Finding("error", doc.doc_id, f"{name}[{i}]",
                            f"offsets {item.start}..{item.end} outside text")
                )

    # tokens strictly ordered and non-overlapping
    for i, (a, b) in enumerate(zip(doc.tokens, doc.tokens[1:])):
        if b.start < a.end:
            findings.append(
                Finding("error", doc.doc_id, f"tokens[{i + 1}]", "tokens overlap or are unordered")
            )

    # paragraphs ordered, non-overlapping
    for i, (a, b) in enumerate(zip(doc.paragraphs, doc.paragraphs[1:])):
        if b.start < a.end:
            findings.append(
                Finding("error", doc.doc_id, f"paragraphs[{i + 1}]", "paragraphs overlap or are unordered")
            )

    # sentences: ordered, non-overlapping, each within one paragraph
    for i, (a, b) in enumerate(zip(doc.sentences, doc.sentences[1:])):
        if b.start < a.end:
            findings.append(
                Finding("error", doc.doc_id, f"sentences[{i + 1}]", "sentences overlap or are unordered")
            )
    for i, sent in enumerate(doc.sentences):
        if not any(p.start <= sent.start and sent.end <= p.end for p in doc.paragraphs):
            findings.append(
                Finding("error", doc.doc_id, f"sentences[{i}]", "sentence lies in no paragraph")
            )
        if sent.token_range is None:
            findings.append(
                Finding("warning", doc.doc_id, f"sentences[{i}]", "sentence contains no token")
            )

    # every token inside exactly one sentence
    for tok in doc.tokens:
        holders = [
            i for i, s in enumerate(doc.sentences)
            if s.token_range is not None and s.token_range[0] <= tok.index <= s.token_range[1]
        ]
        inside = [i for i, s in enumerate(doc.sentences) if s.start <= tok.start and tok.end <= s.end]
        if len(inside) != 1 or len(holders) != 1:
            findings.append(
                Finding("error", doc.doc_id, f"tokens[{tok.index}]",
                        "token does not lie within exactly one sentence")
            )

    for i, ann in enumerate(doc.annotations):
        findings.extend(_validate_annotation_set(doc, ann, f"annotations[{i}]"))
    if doc.gold is not None:
        findings.extend(_validate_annotation_set(doc, doc.gold, "gold"))
    return findings


def validate_corpus(corpus: Corpus) -> list[Finding]:
    findings = []
    seen: dict[str, int] = {}
    for doc in corpus.documents:
        if doc.doc_id in seen:
            findings.append(Finding("error", doc.doc_id, "id", "duplicate document id"))
        seen[doc.doc_id] = 1
        findings.extend(validate_document(doc))
    return findings


# ---------------------------------------------------------------------------
# Gold standard by majority vote

def _token_label(ann: AnnotationSet, dimension: str, n_tokens: int) -> list[Optional[str]]:
    labels: list[Optional[str]] = [None] * n_tokens
    for span in ann.spans_in_dimension(dimension):
        for t in range(span.first_token, span.last_token + 1):
            labels[t] = span.component_type
    return labels


def build_gold_majority(doc: Document) -> tuple[AnnotationSet, list[UnresolvedRegion]]:
    """Token-level strict-majority vote over the document's annotation sets.

    Per token and dimension, the label (component type or none) backed by more
    than half of the annotators wins.  Adjacent tokens with the same winning
    label merge into one span, except that a new span starts wherever at least
    two annotators begin a component of that type, which keeps adjacent
    same-type components separate.  Tokens where no label reaches a strict
    majority are labeled none and reported as unresolved regions.
    """
    m = len(doc.annotations)
    if m < 3:
        raise GoldConstructionError(
            f"majority vote needs at least 3 annotation sets, got {m} in doc '{doc.doc_id}'"
        )
    n = doc.n_tokens
    spans: list[ComponentSpan] = []
    unresolved: list[UnresolvedRegion] = []

    for dimension in DIMENSIONS:
        per_annotator = [_token_label(ann, dimension, n) for ann in doc.annotations]
        majority: list[Optional[str]] = [None] * n
        tied: list[bool] = [False] * n
        for t in range(n):
            counts: dict[Optional[str], int] = {}
            for labels in per_annotator:
                counts[labels[t]] = counts.get(labels[t], 0) + 1
            winner = max(counts.items(), key=lambda kv: kv[1])
            if winner[1] * 2 > m:
                majority[t] = winner[0]
            else:
                majority[t] = None
                tied[t] = True

        # span starts agreed on by >= 2 annotators, per component type
        start_votes: dict[tuple[int, str], int] = {}
        for ann in doc.annotations:
            for span in ann.spans_in_dimension(dimension):
                key = (span.first_token, span.component_type)
                start_votes[key] = start_votes.get(key, 0) + 1

        t = 0
        while t < n:
            label = majority[t]
            if label is None:
                t += 1
                continue
            end = t
            while (
                end + 1 < n
                and majority[end + 1] == label
                and start_votes.get((end + 1, label), 0) < 2
            ):
                end += 1
            spans.append(
                ComponentSpan(component_type=label, dimension=dimension, first_token=t, last_token=end)
            )
            t = end + 1

        t = 0
        while t < n:
            if not tied[t]:
                t += 1
                continue
            end = t
            while end + 1 < n and tied[end + 1]:
                end += 1
            unresolved.append(UnresolvedRegion(dimension=dimension, first_token=t, last_token=end))
            t = end + 1

    # carry over summaries/implicit flags where >= 2 annotators drew the exact same span
    final_spans = []
    for span in spans:
        matches = [
            s
            for ann in doc.annotations
            for s in ann.spans
            if (s.component_type, s.dimension, s.first_token, s.last_token)
            == (span.component_type, span.dimension, span.first_token, span.last_token)
        ]
        if len(matches) >= 2:
            summaries = [s.summary for s in matches]
            summary = max(set(summaries), key=summaries.count)
            implicit = sum(s.implicit for s in matches) * 2 > len(matches)
            span = replace(span, summary=summary, implicit=implicit)
        final_spans.append(span)
    final_spans.sort(key=lambda s: (s.dimension, s.first_token))

    stances = [a.implicit_claim_stance for a in doc.annotations if a.implicit_claim_stance]
    stance = None
    if stances:
        best = max(set(stances), key=stances.count)
        if stances.count(best) * 2 > m:
            stance = best

    gold = AnnotationSet(
        annotator_id=GOLD_ANNOTATOR_ID, spans=tuple(final_spans), implicit_claim_stance=stance
    )
    return gold, unresolved


# ---------------------------------------------------------------------------
# Statistics

def _moments(values: Sequence[float]) -> dict:
    if not values:
        return {"total": 0, "mean": 0.0, "stdev": 0.0}
    return {
        "total": int(sum(values)),
        "mean": float(_stats.fmean(values)),
        "stdev": float(_stats.pstdev(values)),
    }


def corpus_statistics(corpus: Corpus) -> dict:
    """Topic/register document counts, token and sentence moments per register,
    and the sentence-level class distribution of the gold annotations."""
    from .encoding import BIO_LABELS, sentence_approximate  # local import avoids a cycle

    topic_register: dict[str, dict[str, int]] = {t: {r: 0 for r in REGISTERS} for t in TOPICS}
    for doc in corpus.documents:
        topic_register[doc.topic][doc.register] += 1

    tokens_by_register: dict[str, list[int]] = {r: [] for r in REGISTERS}
    sentences_by_register: dict[str, list[int]] = {r: [] for r in REGISTERS}
    for doc in corpus.documents:
        tokens_by_register[doc.register].append(doc.n_tokens)
        sentences_by_register[doc.register].append(doc.n_sentences)

    all_tokens = [doc.n_tokens for doc in corpus.documents]
    all_sentences = [doc.n_sentences for doc in corpus.documents]

    stats = {
        "documents": len(corpus.documents),
        "topic_register": {
            topic: {**counts, "total": sum(counts.values())}
            for topic, counts in topic_register.items()
        },
        "register_totals": {
            register: sum(counts[register] for counts in topic_register.values())
            for register in REGISTERS
        },
        "tokens": {
            "by_register": {r: _moments(v) for r, v in tokens_by_register.items()},
            "all": _moments(all_tokens),
        },
        "sentences": {
            "by_register": {r: _moments(v) for r, v in sentences_by_register.items()},
            "all": _moments(all_sentences),
        },
        "notices": [],
    }

    missing_gold = [doc.doc_id for doc in corpus.documents if doc.gold is None]
    if missing_gold:
        stats["class_distribution"] = None
        stats["notices"].append(
            f"class distribution omitted: {len(missing_gold)} document(s) without gold annotations"
        )
        return stats

    counts = {label: 0 for label in BIO_LABELS}
    total = 0
    for doc in corpus.documents:
        labeling = sentence_approximate(doc, doc.gold)
        for label in labeling.labels:
            counts[label] += 1
            total += 1
    stats["class_distribution"] = {
        "counts": counts,
        "relative": {
            label: (counts[label] / total if total else 0.0) for label in BIO_LABELS
        },
        "total_sentences": total,
    }
    return stats

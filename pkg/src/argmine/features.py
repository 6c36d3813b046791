"""Sentence feature extraction: lexical n-grams, structural features, topic and
sentiment scores, semantic/discourse layer features, and summed word embeddings.

Features of the current sentence carry plain names; features taken from the
surrounding window carry a relative-position prefix such as ``minus2Sent_`` or
``plus1Sent_``.  Lexical n-gram features apply to the current sentence only.
External preprocessor output (POS, parses, sentiment, semantic roles,
coreference, discourse relations) is read from a sidecar file; absent layers
degrade gracefully and the omission is recorded.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import Corpus, Document
from .errors import EmbeddingFormatError, ResourceError

logger = logging.getLogger(__name__)

FEATURE_SET_IDS = (0, 1, 2, 3, 4)


@dataclass(frozen=True)
class FeatureConfig:
    """Which feature sets are active, the context window size, and the n-gram
    frequency cutoff."""

    feature_sets: frozenset[int]
    window: int = 4
    min_count: int = 2

    @classmethod
    def from_string(cls, digits: str, window: int = 4, min_count: int = 2) -> "FeatureConfig":
        sets = set()
        for ch in digits:
            if not ch.isdigit() or int(ch) not in FEATURE_SET_IDS:
                raise ValueError(f"invalid feature-set combination '{digits}'")
            sets.add(int(ch))
        if not sets:
            raise ValueError("feature-set combination must name at least one set")
        return cls(feature_sets=frozenset(sets), window=window, min_count=min_count)

    def as_string(self) -> str:
        return "".join(str(i) for i in sorted(self.feature_sets))

    def to_dict(self) -> dict:
        return {
            "feature_sets": self.as_string(),
            "window": self.window,
            "min_count": self.min_count,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "FeatureConfig":
        return cls.from_string(
            obj["feature_sets"], window=int(obj["window"]), min_count=int(obj["min_count"])
        )


def sentence_tokens_text(doc: Document, sent_index: int, lowercase: bool = False) -> list[str]:
    toks = [doc.token_text(t) for t in doc.sentence_tokens(sent_index)]
    if lowercase:
        toks = [t.lower() for t in toks]
    return toks


# ---------------------------------------------------------------------------
# Vocabulary

@dataclass(frozen=True)
class Vocabulary:
    """N-grams (n in 1..3) surviving the frequency cutoff, with stable ids."""

    ngrams: Mapping[tuple[str, ...], int]
    min_count: int

    def __contains__(self, ngram: tuple[str, ...]) -> bool:
        return ngram in self.ngrams

    def __len__(self) -> int:
        return len(self.ngrams)


def iter_sentence_ngrams(tokens: Sequence[str]):
    for n in (1, 2, 3):
        for i in range(len(tokens) - n + 1):
            yield tuple(tokens[i:i + n])


def build_vocabulary(
    corpus: Corpus, fold_train_ids: Sequence[str], min_count: int = 2
) -> Vocabulary:
    """N-gram vocabulary over the lowercased training documents only."""
    if not fold_train_ids:
        raise ValueError("training ids must be nonempty")
    wanted = set(fold_train_ids)
    counts: Counter = Counter()
    for doc in corpus.documents:
        if doc.doc_id not in wanted:
            continue
        for k in range(doc.n_sentences):
            counts.update(iter_sentence_ngrams(sentence_tokens_text(doc, k, lowercase=True)))
    kept = sorted(g for g, c in counts.items() if c >= min_count)
    return Vocabulary(ngrams={g: i for i, g in enumerate(kept)}, min_count=min_count)


# ---------------------------------------------------------------------------
# Embeddings

@dataclass(frozen=True)
class EmbeddingTable:
    vectors: Mapping[str, np.ndarray]
    dim: int


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Read a text word-vector file: optional '<count> <dim>' header, then one
    word and its components per line."""
    vectors: dict[str, np.ndarray] = {}
    dim: Optional[int] = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            word = parts[0]
            try:
                vec = np.array([float(v) for v in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise EmbeddingFormatError(f"non-numeric vector component: {exc}", line=lineno)
            if vec.size == 0:
                raise EmbeddingFormatError("line has no vector components", line=lineno)
            if dim is None:
                dim = int(vec.size)
            elif vec.size != dim:
                raise EmbeddingFormatError(
                    f"expected {dim} components, found {vec.size}", line=lineno
                )
            if word in vectors:
                logger.warning("duplicate embedding for %r; keeping the last occurrence", word)
            vectors[word] = vec
    if dim is None:
        raise EmbeddingFormatError("embedding file contains no vectors")
    return EmbeddingTable(vectors=vectors, dim=dim)


def sentence_embedding(tokens: Sequence[str], table: EmbeddingTable) -> np.ndarray:
    """Elementwise sum of the vectors of in-table words; unknown words are
    skipped and an all-unknown sentence yields the zero vector."""
    out = np.zeros(table.dim, dtype=np.float64)
    for tok in tokens:
        vec = table.vectors.get(tok.lower())
        if vec is not None:
            out += vec
    return out


# ---------------------------------------------------------------------------
# Linguistic layers (external preprocessor output)

@dataclass(frozen=True)
class LinguisticLayers:
    """Optional per-document annotation layers from external preprocessors."""

    pos: Optional[tuple[str, ...]] = None                       # per token
    sentiment: Optional[tuple[tuple[float, ...], ...]] = None   # per sentence, 5 scores
    depth: Optional[tuple[int, ...]] = None                     # per sentence
    productions: Optional[tuple[tuple[str, ...], ...]] = None   # per sentence
    subclauses: Optional[tuple[int, ...]] = None                # per sentence
    srl: Optional[tuple[tuple[dict, ...], ...]] = None          # per sentence, frames
    coref: Optional[tuple[dict, ...]] = None                    # per sentence
    discourse: Optional[tuple[dict, ...]] = None                # per sentence

    @classmethod
    def from_json(cls, obj: dict) -> "LinguisticLayers":
        syntax = obj.get("syntax", {})
        return cls(
            pos=tuple(obj["pos"]) if "pos" in obj else None,
            sentiment=tuple(tuple(float(x) for x in row) for row in obj["sentiment"])
            if "sentiment" in obj
            else None,
            depth=tuple(int(x) for x in syntax["depth"]) if "depth" in syntax else None,
            productions=tuple(tuple(rules) for rules in syntax["productions"])
            if "productions" in syntax
            else None,
            subclauses=tuple(int(x) for x in syntax["subclauses"])
            if "subclauses" in syntax
            else None,
            srl=tuple(tuple(frames) for frames in obj["srl"]) if "srl" in obj else None,
            coref=tuple(obj["coref"]) if "coref" in obj else None,
            discourse=tuple(obj["discourse"]) if "discourse" in obj else None,
        )

    def validate_against(self, doc: Document) -> None:
        per_sentence = {
            "sentiment": self.sentiment,
            "depth": self.depth,
            "productions": self.productions,
            "subclauses": self.subclauses,
            "srl": self.srl,
            "coref": self.coref,
            "discourse": self.discourse,
        }
        if self.pos is not None and len(self.pos) != doc.n_tokens:
            raise ValueError(
                f"layer 'pos' for doc '{doc.doc_id}' has {len(self.pos)} entries, "
                f"expected {doc.n_tokens}"
            )
        for name, layer in per_sentence.items():
            if layer is not None and len(layer) != doc.n_sentences:
                raise ValueError(
                    f"layer '{name}' for doc '{doc.doc_id}' has {len(layer)} entries, "
                    f"expected {doc.n_sentences}"
                )


def load_layers(path: str | Path) -> dict[str, LinguisticLayers]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(obj, dict):
        raise ValueError("layer sidecar must be a JSON object keyed by document id")
    return {doc_id: LinguisticLayers.from_json(entry) for doc_id, entry in obj.items()}


# ---------------------------------------------------------------------------
# Extraction

@dataclass
class Resources:
    """Bundle of fitted/loaded inputs used by feature extraction."""

    feature_sets: frozenset[int]
    vocabulary: Optional[Vocabulary] = None
    embeddings: Optional[EmbeddingTable] = None
    topic_model: Optional[object] = None  # GibbsLda-compatible: transform([tokens]) -> (1, T)
    layers: Optional[Mapping[str, LinguisticLayers]] = None


def _position_prefix(offset: int) -> str:
    if offset == 0:
        return ""
    if offset < 0:
        return f"minus{-offset}Sent_"
    return f"plus{offset}Sent_"


def _structural_features(doc: Document, k: int, layers: Optional[LinguisticLayers], degraded: set) -> dict[str, float]:
    out: dict[str, float] = {}
    tokens = [doc.token_text(t) for t in doc.sentence_tokens(k)]
    for j in range(min(3, len(tokens))):
        out[f"FS1_first{j + 1}={tokens[j]}"] = 1.0
        out[f"FS1_last{j + 1}={tokens[-(j + 1)]}"] = 1.0

    n = doc.n_sentences
    out["FS1_rel_pos_doc"] = k / (n - 1) if n > 1 else 0.0
    par = doc.paragraph_index_of_sentence(k)
    in_par = [i for i in range(n) if doc.paragraph_index_of_sentence(i) == par]
    pos = in_par.index(k)
    out["FS1_rel_pos_par"] = pos / (len(in_par) - 1) if len(in_par) > 1 else 0.0

    if layers is not None and layers.pos is not None:
        tags = [layers.pos[t] for t in doc.sentence_tokens(k)]
        for n_gram in (1, 2, 3):
            counts = Counter(
                tuple(tags[i:i + n_gram]) for i in range(len(tags) - n_gram + 1)
            )
            for gram, count in counts.items():
                out[f"FS1_pos{n_gram}={'_'.join(gram)}"] = float(count)
    else:
        degraded.add("FS1:pos")
    if layers is not None and layers.depth is not None:
        out["FS1_dep_depth"] = float(layers.depth[k])
    else:
        degraded.add("FS1:dependency_depth")
    if layers is not None and layers.productions is not None:
        for rule in layers.productions[k]:
            out[f"FS1_prod={rule}"] = 1.0
    else:
        degraded.add("FS1:productions")
    if layers is not None and layers.subclauses is not None:
        out["FS1_subclauses"] = float(layers.subclauses[k])
    else:
        degraded.add("FS1:subclauses")
    return out


def _topic_sentiment_features(
    doc: Document, k: int, resources: Resources, layers: Optional[LinguisticLayers], degraded: set
) -> dict[str, float]:
    out: dict[str, float] = {}
    if resources.topic_model is None:
        raise ResourceError("feature set 2 selected but no topic model is available")
    tokens = sentence_tokens_text(doc, k, lowercase=True)
    proportions = np.asarray(resources.topic_model.transform([tokens]))[0]
    for i, p in enumerate(proportions):
        out[f"FS2_topic{i:02d}"] = float(p)
    if layers is not None and layers.sentiment is not None:
        for i, score in enumerate(layers.sentiment[k]):
            out[f"FS2_sentiment{i}"] = float(score)
    else:
        degraded.add("FS2:sentiment")
    return out


def _semantic_features(layers: Optional[LinguisticLayers], k: int, degraded: set) -> dict[str, float]:
    out: dict[str, float] = {}
    if layers is None or layers.srl is None:
        degraded.add("FS3:srl")
    else:
        for frame in layers.srl[k]:
            for key, name in (
                ("agent", "agent"),
                ("predicate_agent", "pred_agent"),
                ("predicate_agent_patient", "pred_agent_patient"),
                ("discourse_marker", "marker"),
            ):
                value = frame.get(key)
                if value:
                    out[f"FS3_srl_{name}={value}"] = 1.0
            for arg_type, arg_value in frame.get("arguments", ()):
                out[f"FS3_srl_arg={arg_type}:{arg_value}"] = 1.0
    if layers is None or layers.coref is None:
        degraded.add("FS3:coref")
    else:
        entry = layers.coref[k]
        if entry.get("in_chain"):
            out["FS3_coref_in_chain"] = 1.0
        for transition in entry.get("transitions", ()):
            out[f"FS3_coref_trans={transition}"] = 1.0
        if entry.get("dist_prev") is not None:
            out["FS3_coref_dist_prev"] = float(entry["dist_prev"])
        if entry.get("dist_next") is not None:
            out["FS3_coref_dist_next"] = float(entry["dist_next"])
        if entry.get("links"):
            out["FS3_coref_links"] = float(entry["links"])
    if layers is None or layers.discourse is None:
        degraded.add("FS3:discourse")
    else:
        entry = layers.discourse[k]
        for rel_type in entry.get("types", ()):
            out[f"FS3_disc_rel={rel_type}"] = 1.0
        for connective in entry.get("connectives", ()):
            out[f"FS3_disc_conn={connective}"] = 1.0
        if entry.get("attributions"):
            out["FS3_disc_attr"] = 1.0
    return out


def _embedding_features(doc: Document, k: int, resources: Resources) -> dict[str, float]:
    if resources.embeddings is None:
        raise ResourceError("feature set 4 selected but no embedding table is available")
    vec = sentence_embedding(sentence_tokens_text(doc, k), resources.embeddings)
    return {f"FS4_emb{i:03d}": float(v) for i, v in enumerate(vec)}


def _window_features(
    doc: Document, k: int, sets: frozenset[int], resources: Resources, degraded: set
) -> dict[str, float]:
    """Features of one sentence that participate in the context window."""
    layers = None
    if resources.layers is not None:
        layers = resources.layers.get(doc.doc_id)
        if layers is not None:
            layers.validate_against(doc)
    out: dict[str, float] = {}
    if 1 in sets:
        out.update(_structural_features(doc, k, layers, degraded))
    if 2 in sets:
        out.update(_topic_sentiment_features(doc, k, resources, layers, degraded))
    if 3 in sets:
        out.update(_semantic_features(layers, k, degraded))
    if 4 in sets:
        out.update(_embedding_features(doc, k, resources))
    return out


def extract_features(
    doc: Document,
    sent_index: int,
    config: FeatureConfig,
    resources: Resources,
    degraded: Optional[set] = None,
) -> dict[str, float]:
    """Feature vector of one sentence under the given configuration.

    Lexical n-gram hits cover the current sentence only; all other selected
    sets are also extracted for the window of surrounding sentences with
    positional prefixes.
    """
    if not (0 <= sent_index < doc.n_sentences):
        raise IndexError(f"sentence index {sent_index} out of range")
    if degraded is None:
        degraded = set()
    sets = config.feature_sets
    out: dict[str, float] = {}

    if 0 in sets:
        if resources.vocabulary is None:
            raise ResourceError("feature set 0 selected but no vocabulary is available")
        tokens = sentence_tokens_text(doc, sent_index, lowercase=True)
        for gram in iter_sentence_ngrams(tokens):
            if gram in resources.vocabulary:
                out[f"FS0_ng{len(gram)}={' '.join(gram)}"] = 1.0

    windowed = sets - {0}
    if windowed:
        for offset in range(-config.window, config.window + 1):
            k = sent_index + offset
            if not (0 <= k < doc.n_sentences):
                continue
            prefix = _position_prefix(offset)
            for name, value in _window_features(doc, k, windowed, resources, degraded).items():
                out[prefix + name] = value
    return out


def extract_document_features(
    doc: Document,
    config: FeatureConfig,
    resources: Resources,
    degraded: Optional[set] = None,
) -> list[dict[str, float]]:
    return [
        extract_features(doc, k, config, resources, degraded) for k in range(doc.n_sentences)
    ]


class SentenceFeatureExtractor(BaseEstimator):
    """Fit/transform wrapper: fits the n-gram vocabulary (and, when requested
    and not supplied, a topic model) on training documents only, then turns
    any document into per-sentence feature vectors."""

    def __init__(
        self,
        feature_sets: str = "0",
        window: int = 4,
        min_count: int = 2,
        embeddings: Optional[EmbeddingTable] = None,
        layers: Optional[Mapping[str, LinguisticLayers]] = None,
        topic_model=None,
        lda_params: Optional[dict] = None,
        seed: int = 0,
    ):
        self.feature_sets = feature_sets
        self.window = window
        self.min_count = min_count
        self.embeddings = embeddings
        self.layers = layers
        self.topic_model = topic_model
        self.lda_params = lda_params
        self.seed = seed

    def fit(self, corpus: Corpus, train_ids: Optional[Sequence[str]] = None):
        from .lda import GibbsLda  # local import avoids a cycle

        config = FeatureConfig.from_string(
            self.feature_sets, window=self.window, min_count=self.min_count
        )
        if train_ids is None:
            train_ids = [doc.doc_id for doc in corpus.documents]
        self.config_ = config
        self.degraded_: set = set()

        vocabulary = None
        if 0 in config.feature_sets:
            vocabulary = build_vocabulary(corpus, train_ids, min_count=config.min_count)

        topic_model = self.topic_model
        if 2 in config.feature_sets and topic_model is None:
            params = dict(self.lda_params or {})
            params.setdefault("seed", self.seed)
            topic_model = GibbsLda(**params)
            wanted = set(train_ids)
            texts = [
                sentence_tokens_text(doc, k, lowercase=True)
                for doc in corpus.documents
                if doc.doc_id in wanted
                for k in range(doc.n_sentences)
            ]
            topic_model.fit(texts)

        self.resources_ = Resources(
            feature_sets=config.feature_sets,
            vocabulary=vocabulary,
            embeddings=self.embeddings,
            topic_model=topic_model,
            layers=self.layers,
        )
        return self

    def transform(self, doc: Document) -> list[dict[str, float]]:
        return extract_document_features(doc, self.config_, self.resources_, self.degraded_)

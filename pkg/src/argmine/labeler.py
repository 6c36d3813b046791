"""Linear-chain sequence labeler over sentence feature vectors.

First-order transition weights plus per-label emission weights, decoded with
Viterbi and trained with the averaged structured perceptron.  Decoding ties
break toward the earlier label in the fixed label order, so an all-zero model
labels everything with the first label.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import Document
from .encoding import BIO_LABELS, SentenceLabeling, expand_to_tokens
from .errors import ConfigMismatchError, ModelFormatError
from .features import FeatureConfig, Resources, extract_document_features
from .util import derive_seed, float17

MODEL_FORMAT_VERSION = "argmine-chain-model/1"

FeatureVector = dict


@dataclass
class LinearChainModel:
    label_order: tuple[str, ...]
    feature_config: dict
    emission: dict[str, np.ndarray]   # feature name -> per-label weights
    transitions: np.ndarray           # previous x next label weights
    metadata: dict = field(default_factory=dict)

    @property
    def n_labels(self) -> int:
        return len(self.label_order)


def _emissions_matrix(model: LinearChainModel, sequence: Sequence[FeatureVector]) -> np.ndarray:
    scores = np.zeros((len(sequence), model.n_labels), dtype=np.float64)
    for t, features in enumerate(sequence):
        row = scores[t]
        for name, value in features.items():
            weights = model.emission.get(name)
            if weights is not None:
                row += value * weights
    return scores


def viterbi_decode(model: LinearChainModel, sequence: Sequence[FeatureVector]) -> list[str]:
    """Highest-scoring label sequence under emission plus first-order
    transition weights.  np.argmax returns the first maximum, which realizes
    the fixed-label-order tie-break."""
    if not sequence:
        raise ValueError("cannot decode an empty sequence")
    emissions = _emissions_matrix(model, sequence)
    n = len(sequence)
    L = model.n_labels
    back = np.zeros((n, L), dtype=np.int64)
    score = emissions[0].copy()
    for t in range(1, n):
        candidate = score[:, None] + model.transitions
        back[t] = np.argmax(candidate, axis=0)
        score = candidate[back[t], np.arange(L)] + emissions[t]
    path = [int(np.argmax(score))]
    for t in range(n - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    path.reverse()
    return [model.label_order[i] for i in path]


def sequence_score(model: LinearChainModel, sequence: Sequence[FeatureVector], labels: Sequence[str]) -> float:
    emissions = _emissions_matrix(model, sequence)
    index = {label: i for i, label in enumerate(model.label_order)}
    ids = [index[l] for l in labels]
    total = float(sum(emissions[t, k] for t, k in enumerate(ids)))
    total += float(sum(model.transitions[a, b] for a, b in zip(ids, ids[1:])))
    return total


class ArgumentComponentLabeler(BaseEstimator):
    """Averaged structured perceptron over sentence sequences.

    fit() takes one feature-vector sequence and one label sequence per
    document; identical seeds give bit-identical weights.
    """

    def __init__(
        self,
        epochs: int = 10,
        seed: int = 0,
        shuffle: bool = True,
        averaging: bool = True,
        labels: Sequence[str] = BIO_LABELS,
    ):
        self.epochs = epochs
        self.seed = seed
        self.shuffle = shuffle
        self.averaging = averaging
        self.labels = labels

    def fit(
        self,
        X: Sequence[Sequence[FeatureVector]],
        y: Sequence[Sequence[str]],
        feature_config: Optional[dict] = None,
    ):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if len(X) != len(y):
            raise ValueError("X and y must have equal length")
        label_order = tuple(self.labels)
        index = {label: i for i, label in enumerate(label_order)}
        L = len(label_order)
        if not any(fv for seq in X for fv in seq):
            raise ValueError("empty feature space: no sequence carries any feature")

        weights: dict[str, np.ndarray] = {}
        accum: dict[str, np.ndarray] = {}
        transitions = np.zeros((L, L), dtype=np.float64)
        trans_accum = np.zeros((L, L), dtype=np.float64)
        model = LinearChainModel(
            label_order=label_order,
            feature_config=feature_config or {},
            emission=weights,
            transitions=transitions,
        )

        def bump(name: str, label_id: int, delta: float, step: int) -> None:
            row = weights.get(name)
            if row is None:
                row = weights[name] = np.zeros(L, dtype=np.float64)
                accum[name] = np.zeros(L, dtype=np.float64)
            row[label_id] += delta
            accum[name][label_id] += step * delta

        rng = random.Random(derive_seed(self.seed, "perceptron"))
        order = list(range(len(X)))
        step = 0
        for _ in range(self.epochs):
            if self.shuffle:
                rng.shuffle(order)
            for si in order:
                sequence, gold = X[si], y[si]
                if not sequence:
                    continue
                step += 1
                predicted = viterbi_decode(model, sequence)
                if predicted == list(gold):
                    continue
                for t, (g, p) in enumerate(zip(gold, predicted)):
                    if g == p:
                        continue
                    gi, pi = index[g], index[p]
                    for name, value in sequence[t].items():
                        bump(name, gi, value, step)
                        bump(name, pi, -value, step)
                for (g0, g1), (p0, p1) in zip(
                    zip(gold, gold[1:]), zip(predicted, predicted[1:])
                ):
                    if (g0, g1) == (p0, p1):
                        continue
                    a, b = index[g0], index[g1]
                    transitions[a, b] += 1.0
                    trans_accum[a, b] += step
                    a, b = index[p0], index[p1]
                    transitions[a, b] -= 1.0
                    trans_accum[a, b] -= step

        if self.averaging and step > 0:
            final_emission = {
                name: ((step + 1) * row - accum[name]) / step for name, row in weights.items()
            }
            final_transitions = ((step + 1) * transitions - trans_accum) / step
        else:
            final_emission = weights
            final_transitions = transitions
        final_emission = {name: row for name, row in final_emission.items() if np.any(row)}

        self.model_ = LinearChainModel(
            label_order=label_order,
            feature_config=feature_config or {},
            emission=final_emission,
            transitions=final_transitions,
            metadata={
                "epochs": self.epochs,
                "seed": self.seed,
                "shuffle": self.shuffle,
                "averaging": self.averaging,
                "n_sequences": len(X),
                "steps": step,
            },
        )
        return self

    def predict(self, X: Sequence[Sequence[FeatureVector]]) -> list[list[str]]:
        return [viterbi_decode(self.model_, seq) if seq else [] for seq in X]


# ---------------------------------------------------------------------------
# Whole-document prediction

def predict_document(
    model: LinearChainModel, doc: Document, resources: Resources
) -> tuple[SentenceLabeling, list[str]]:
    """Extract features, decode, and expand the sentence labels to tokens."""
    wanted = model.feature_config.get("feature_sets")
    if wanted is not None:
        supplied = "".join(str(i) for i in sorted(resources.feature_sets))
        if supplied != wanted:
            raise ConfigMismatchError(
                f"model was trained with feature sets '{wanted}' but resources "
                f"declare '{supplied}'"
            )
    if doc.n_sentences == 0:
        labeling = SentenceLabeling(doc_id=doc.doc_id, labels=())
        return labeling, []
    config = FeatureConfig.from_dict(model.feature_config) if wanted is not None else FeatureConfig(
        feature_sets=resources.feature_sets
    )
    sequence = extract_document_features(doc, config, resources)
    labels = viterbi_decode(model, sequence)
    labeling = SentenceLabeling(doc_id=doc.doc_id, labels=tuple(labels))
    return labeling, expand_to_tokens(doc, labeling)


# ---------------------------------------------------------------------------
# Model files

def save_model(model: LinearChainModel, path: str | Path) -> None:
    emission = {}
    for name, row in sorted(model.emission.items()):
        entry = {
            label: float17(w)
            for label, w in zip(model.label_order, row)
            if w != 0.0
        }
        if entry:
            emission[name] = entry
    transitions = {}
    for i, src in enumerate(model.label_order):
        entry = {
            dst: float17(model.transitions[i, j])
            for j, dst in enumerate(model.label_order)
            if model.transitions[i, j] != 0.0
        }
        if entry:
            transitions[src] = entry
    payload = {
        "version": MODEL_FORMAT_VERSION,
        "label_order": list(model.label_order),
        "feature_config": model.feature_config,
        "emission_weights": emission,
        "transition_weights": transitions,
        "training_metadata": model.metadata,
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def load_model(path: str | Path) -> LinearChainModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"unreadable model file: {exc}") from exc
    if not isinstance(payload, dict):
        raise ModelFormatError("model file must contain a JSON object")
    version = payload.get("version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model version {version!r}, expected {MODEL_FORMAT_VERSION!r}"
        )
    label_order = tuple(payload["label_order"])
    index = {label: i for i, label in enumerate(label_order)}
    L = len(label_order)
    emission = {}
    for name, entry in payload["emission_weights"].items():
        row = np.zeros(L, dtype=np.float64)
        for label, w in entry.items():
            row[index[label]] = float(w)
        emission[name] = row
    transitions = np.zeros((L, L), dtype=np.float64)
    for src, entry in payload["transition_weights"].items():
        for dst, w in entry.items():
            transitions[index[src], index[dst]] = float(w)
    return LinearChainModel(
        label_order=label_order,
        feature_config=payload.get("feature_config", {}),
        emission=emission,
        transitions=transitions,
        metadata=payload.get("training_metadata", {}),
    )

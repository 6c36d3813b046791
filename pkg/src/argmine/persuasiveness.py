"""Document-level binary classifier separating on-topic persuasive documents
from the rest, using binary word n-gram features and an averaged perceptron."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from sklearn.base import BaseEstimator

from .corpus import Corpus, Document
from .features import iter_sentence_ngrams, sentence_tokens_text
from .util import derive_seed

BIAS = "__bias__"

PERSUASIVE = True
NON_PERSUASIVE = False


def document_ngram_features(doc: Document, max_n: int = 3) -> dict[str, float]:
    """Binary uni/bi/tri-gram features over the lowercased document, plus a
    constant bias feature (so an empty document is decided by the bias sign)."""
    out = {BIAS: 1.0}
    for k in range(doc.n_sentences):
        tokens = sentence_tokens_text(doc, k, lowercase=True)
        for gram in iter_sentence_ngrams(tokens):
            if len(gram) <= max_n:
                out[f"ng{len(gram)}={' '.join(gram)}"] = 1.0
    return out


class PersuasivenessClassifier(BaseEstimator):
    """Averaged perceptron; updates on every non-positive margin, which keeps
    training exactly antisymmetric under a global label flip."""

    def __init__(self, epochs: int = 10, seed: int = 0, shuffle: bool = True,
                 averaging: bool = True, max_ngram: int = 3):
        self.epochs = epochs
        self.seed = seed
        self.shuffle = shuffle
        self.averaging = averaging
        self.max_ngram = max_ngram

    def fit(self, docs: Sequence[Document], labels: Sequence[bool]):
        if len(docs) != len(labels):
            raise ValueError("docs and labels must have equal length")
        if len(set(labels)) < 2:
            raise ValueError("training data must contain both classes")
        features = [document_ngram_features(d, self.max_ngram) for d in docs]
        targets = [1.0 if l else -1.0 for l in labels]

        weights: dict[str, float] = {}
        accum: dict[str, float] = {}
        rng = random.Random(derive_seed(self.seed, "doc-perceptron"))
        order = list(range(len(docs)))
        step = 0
        for _ in range(self.epochs):
            if self.shuffle:
                rng.shuffle(order)
            for i in order:
                step += 1
                fv, y = features[i], targets[i]
                score = sum(weights.get(f, 0.0) * v for f, v in fv.items())
                if y * score <= 0.0:
                    for f, v in fv.items():
                        weights[f] = weights.get(f, 0.0) + y * v
                        accum[f] = accum.get(f, 0.0) + step * y * v
        if self.averaging and step > 0:
            weights = {
                f: ((step + 1) * w - accum.get(f, 0.0)) / step for f, w in weights.items()
            }
        self.weights_ = {f: w for f, w in weights.items() if w != 0.0}
        return self

    def decision_function(self, docs: Sequence[Document]) -> list[float]:
        out = []
        for doc in docs:
            fv = document_ngram_features(doc, self.max_ngram)
            out.append(sum(self.weights_.get(f, 0.0) * v for f, v in fv.items()))
        return out

    def predict(self, docs: Sequence[Document]) -> list[bool]:
        return [score > 0.0 for score in self.decision_function(docs)]

    def classify(self, doc: Document) -> tuple[bool, float]:
        score = self.decision_function([doc])[0]
        return score > 0.0, score


def binary_scores(gold: Sequence[bool], predicted: Sequence[bool]) -> dict:
    """Accuracy, per-class precision/recall/F1, and their unweighted mean.
    A class with no predicted members scores zero F1."""
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted must have equal length")
    per_class = {}
    f1s = []
    for cls, name in ((True, "persuasive"), (False, "non_persuasive")):
        tp = sum(1 for g, p in zip(gold, predicted) if g == cls and p == cls)
        fp = sum(1 for g, p in zip(gold, predicted) if g != cls and p == cls)
        fn = sum(1 for g, p in zip(gold, predicted) if g == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[name] = {"precision": precision, "recall": recall, "f1": f1,
                           "support": sum(1 for g in gold if g == cls)}
        f1s.append(f1)
    accuracy = sum(1 for g, p in zip(gold, predicted) if g == p) / len(gold) if gold else 0.0
    return {"macro_f1": sum(f1s) / len(f1s), "accuracy": accuracy, "per_class": per_class}


def evaluate_docs(model: PersuasivenessClassifier, docs: Sequence[Document],
                  labels: Sequence[bool]) -> dict:
    return binary_scores(labels, model.predict(docs))


def crossval_persuasive(
    corpus: Corpus, k: int = 10, seed: int = 0, epochs: int = 10
) -> dict:
    """K-fold cross validation over the documents carrying a persuasive label;
    folds are contiguous blocks of a seeded shuffle, scores are pooled."""
    labeled = [d for d in corpus.documents if d.persuasive is not None]
    if k > len(labeled):
        raise ValueError(f"k={k} exceeds the {len(labeled)} labeled documents")
    rng = random.Random(derive_seed(seed, "persuasive-folds"))
    order = list(range(len(labeled)))
    rng.shuffle(order)

    gold: list[bool] = []
    predicted: list[bool] = []
    fold_sizes = [len(order) // k + (1 if i < len(order) % k else 0) for i in range(k)]
    start = 0
    for fold, size in enumerate(fold_sizes):
        test_idx = order[start:start + size]
        train_idx = order[:start] + order[start + size:]
        start += size
        train_docs = [labeled[i] for i in train_idx]
        train_labels = [labeled[i].persuasive.label for i in train_idx]
        model = PersuasivenessClassifier(
            epochs=epochs, seed=derive_seed(seed, "persuasive", fold)
        ).fit(train_docs, train_labels)
        test_docs = [labeled[i] for i in test_idx]
        gold.extend(labeled[i].persuasive.label for i in test_idx)
        predicted.extend(model.predict(test_docs))
    scores = binary_scores(gold, predicted)
    scores["n_documents"] = len(labeled)
    scores["n_positive"] = sum(1 for d in labeled if d.persuasive.label)
    scores["k"] = k
    scores["seed"] = seed
    return scores

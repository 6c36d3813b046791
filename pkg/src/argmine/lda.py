"""Collapsed Gibbs sampling for latent Dirichlet allocation.

Single-chain, single-threaded, and fully deterministic for a fixed seed.
Topic inference for unseen text folds the text in against the frozen
word-topic counts with a content-derived seed, so inference is a pure
function of the model and the text.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .util import derive_seed


class GibbsLda(BaseEstimator):
    def __init__(
        self,
        n_topics: int = 30,
        alpha: Optional[float] = None,
        beta: float = 0.01,
        n_iterations: int = 1000,
        infer_iterations: int = 50,
        seed: int = 0,
    ):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.n_iterations = n_iterations
        self.infer_iterations = infer_iterations
        self.seed = seed

    # -- training ----------------------------------------------------------

    def fit(self, docs: Sequence[Sequence[str]]):
        if self.n_topics < 2:
            raise ValueError("need at least 2 topics")
        if not docs:
            raise ValueError("empty corpus")
        vocab = sorted({w for doc in docs for w in doc})
        if not vocab:
            raise ValueError("empty vocabulary")
        self.vocab_ = {w: i for i, w in enumerate(vocab)}
        self.alpha_ = self.alpha if self.alpha is not None else 50.0 / self.n_topics

        T = self.n_topics
        V = len(vocab)
        word_ids = [np.array([self.vocab_[w] for w in doc], dtype=np.int64) for doc in docs]

        rng = np.random.default_rng(self.seed)
        n_dk = np.zeros((len(docs), T), dtype=np.float64)
        n_kw = np.zeros((T, V), dtype=np.float64)
        n_k = np.zeros(T, dtype=np.float64)
        assignments = []
        for d, ids in enumerate(word_ids):
            z = rng.integers(0, T, size=ids.size)
            assignments.append(z)
            for w, k in zip(ids, z):
                n_dk[d, k] += 1
                n_kw[k, w] += 1
                n_k[k] += 1

        beta = self.beta
        v_beta = V * beta
        for _ in range(self.n_iterations):
            for d, ids in enumerate(word_ids):
                z = assignments[d]
                row = n_dk[d]
                for i in range(ids.size):
                    w = ids[i]
                    k = z[i]
                    row[k] -= 1
                    n_kw[k, w] -= 1
                    n_k[k] -= 1
                    probs = (row + self.alpha_) * (n_kw[:, w] + beta) / (n_k + v_beta)
                    cumulative = np.cumsum(probs)
                    k = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
                    k = min(k, T - 1)
                    z[i] = k
                    row[k] += 1
                    n_kw[k, w] += 1
                    n_k[k] += 1

        self.n_kw_ = n_kw
        self.n_k_ = n_k
        alpha = self.alpha_
        self.doc_topics_ = (n_dk + alpha) / (n_dk.sum(axis=1, keepdims=True) + T * alpha)
        return self

    # -- inference ---------------------------------------------------------

    def _infer_one(self, tokens: Sequence[str]) -> np.ndarray:
        T = self.n_topics
        alpha = self.alpha_
        ids = np.array([self.vocab_[w] for w in tokens if w in self.vocab_], dtype=np.int64)
        if ids.size == 0:
            return np.full(T, 1.0 / T)
        rng = np.random.default_rng(derive_seed(self.seed, "infer", tuple(tokens)))
        beta = self.beta
        v_beta = len(self.vocab_) * beta
        counts = np.zeros(T, dtype=np.float64)
        z = rng.integers(0, T, size=ids.size)
        for k in z:
            counts[k] += 1
        for _ in range(self.infer_iterations):
            for i in range(ids.size):
                w = ids[i]
                k = z[i]
                counts[k] -= 1
                probs = (counts + alpha) * (self.n_kw_[:, w] + beta) / (self.n_k_ + v_beta)
                cumulative = np.cumsum(probs)
                k = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
                k = min(k, T - 1)
                z[i] = k
                counts[k] += 1
        return (counts + alpha) / (ids.size + T * alpha)

    def transform(self, docs: Sequence[Sequence[str]]) -> np.ndarray:
        """Per-document topic proportions; each row sums to 1."""
        return np.stack([self._infer_one(doc) for doc in docs])

    def top_words(self, topic: int, k: int = 10) -> list[str]:
        inverse = sorted(self.vocab_, key=self.vocab_.get)
        order = np.argsort(-self.n_kw_[topic])
        return [inverse[i] for i in order[:k]]

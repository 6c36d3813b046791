"""Independent brute-force oracles.

Each oracle re-implements a metric directly from its definition with plain
enumeration, deliberately sharing no code with the package, so the optimized
implementations can be checked against them.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Sequence


# ---------------------------------------------------------------------------
# Unitized agreement

def _sections(units: list[tuple[int, int]], length: int) -> list[tuple[int, int, str]]:
    """Alternating unit/gap sections covering [0, length)."""
    secs = []
    prev = 0
    for b, e in sorted(units):
        if b > prev:
            secs.append((prev, b, "gap"))
        secs.append((b, e, "unit"))
        prev = e
    if prev < length:
        secs.append((prev, length, "gap"))
    return secs


def _delta2(g: tuple[int, int, str], h: tuple[int, int, str]) -> float:
    b1, e1, k1 = g
    b2, e2, k2 = h
    if e1 <= b2 or e2 <= b1:
        return 0.0
    if k1 == "unit" and k2 == "unit":
        return float(b1 - b2) ** 2 + float(e1 - e2) ** 2
    if k1 == "unit" and k2 == "gap":
        return float(e1 - b1) ** 2 if (b1 >= b2 and e1 <= e2) else 0.0
    if k1 == "gap" and k2 == "unit":
        return float(e2 - b2) ** 2 if (b2 >= b1 and e2 <= e1) else 0.0
    return 0.0


def _observed_disagreement(per_annotator: list[list[tuple[int, int]]], length: int) -> float:
    total = 0.0
    m = len(per_annotator)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for g in _sections(per_annotator[i], length):
                for h in _sections(per_annotator[j], length):
                    total += _delta2(g, h)
    return total


def _expected_disagreement(per_annotator: list[list[tuple[int, int]]], length: int) -> float:
    """Expectation of the observed sum when every unit is relocated uniformly
    at random, computed by full enumeration of placements."""
    m = len(per_annotator)
    total = 0.0
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            units_i = per_annotator[i]
            units_j = per_annotator[j]
            # intersecting unit-unit terms
            for (b1, e1) in units_i:
                a = e1 - b1
                n_a = length - a + 1
                for (b2, e2) in units_j:
                    b = e2 - b2
                    n_b = length - b + 1
                    acc = 0.0
                    for s in range(n_a):
                        for t in range(n_b):
                            if s < t + b and t < s + a:
                                acc += float(s - t) ** 2 + float((s + a) - (t + b)) ** 2
                    total += acc / (n_a * n_b)
            # unit-inside-gap terms, both directions
            for (b1, e1) in units_i:
                a = e1 - b1
                n_a = length - a + 1
                acc = 0.0
                for s in range(n_a):
                    p = 1.0
                    for (b2, e2) in units_j:
                        b = e2 - b2
                        n_b = length - b + 1
                        misses = sum(
                            1 for t in range(n_b) if not (s < t + b and t < s + a)
                        )
                        p *= misses / n_b
                    acc += p
                total += (float(a) ** 2) * acc / n_a
            for (b2, e2) in units_j:
                b = e2 - b2
                n_b = length - b + 1
                acc = 0.0
                for t in range(n_b):
                    p = 1.0
                    for (b1, e1) in units_i:
                        a = e1 - b1
                        n_a = length - a + 1
                        misses = sum(
                            1 for s in range(n_a) if not (s < t + b and t < s + a)
                        )
                        p *= misses / n_a
                    acc += p
                total += (float(b) ** 2) * acc / n_b
    return total


def alpha_u_bruteforce(
    length: int,
    units: dict[str, list[tuple[int, int, str]]],
    category: str | Sequence[str],
) -> float:
    """alpha = 1 - D_o/D_e from nested-loop sums over sections and placements."""
    categories = [category] if isinstance(category, str) else list(category)
    annotators = sorted(units)
    d_obs = 0.0
    d_exp = 0.0
    for cat in categories:
        per_annotator = [
            sorted((f, l + 1) for f, l, c in units[a] if c == cat) for a in annotators
        ]
        d_obs += _observed_disagreement(per_annotator, length)
        d_exp += _expected_disagreement(per_annotator, length)
    if d_exp == 0.0:
        raise ZeroDivisionError("expected disagreement is zero")
    if d_obs == 0.0:
        return 1.0
    return 1.0 - d_obs / d_exp


# ---------------------------------------------------------------------------
# Fleiss' kappa

def fleiss_kappa_bruteforce(items: Sequence[Sequence[str]]) -> float:
    n = len(items)
    r = len(items[0])
    categories = sorted({v for item in items for v in item})
    # per-item agreement
    p_bar = 0.0
    for item in items:
        same = 0
        for x in range(r):
            for y in range(r):
                if x != y and item[x] == item[y]:
                    same += 1
        p_bar += same / (r * (r - 1))
    p_bar /= n
    # chance agreement
    p_e = 0.0
    for c in categories:
        share = sum(1 for item in items for v in item if v == c) / (n * r)
        p_e += share * share
    return (p_bar - p_e) / (1.0 - p_e)


# ---------------------------------------------------------------------------
# Viterbi by enumeration

def best_sequence_score_bruteforce(emissions, transitions) -> float:
    """Maximum score over all label sequences; emissions is (T, L), transitions (L, L)."""
    T = len(emissions)
    L = len(emissions[0])
    best = -math.inf
    for labels in itertools.product(range(L), repeat=T):
        score = sum(emissions[t][labels[t]] for t in range(T))
        score += sum(transitions[a][b] for a, b in zip(labels, labels[1:]))
        if score > best:
            best = score
    return best


# ---------------------------------------------------------------------------
# Boundary similarity by exhaustive matching

def boundary_similarity_bruteforce(
    boundaries_a: Sequence[int], boundaries_b: Sequence[int], window: int = 2
) -> float:
    set_a, set_b = set(boundaries_a), set(boundaries_b)
    matches = len(set_a & set_b)
    only_a = sorted(set_a - set_b)
    only_b = sorted(set_b - set_a)

    @lru_cache(maxsize=None)
    def search(i: int, used: frozenset) -> tuple[float, int]:
        """Min cost / max transpositions over all matchings (crossings allowed)."""
        if i == len(only_a):
            rest = len(only_b) - len(used)
            return (rest * 1.0, 0)
        # leave only_a[i] unmatched
        c, t = search(i + 1, used)
        best = (c + 1.0, t)
        for j, pos in enumerate(only_b):
            if j in used:
                continue
            d = abs(only_a[i] - pos)
            if 0 < d < window:
                c, t = search(i + 1, used | {j})
                cand = (c + d / window, t + 1)
                if (cand[0], -cand[1]) < (best[0], -best[1]):
                    best = cand
        return best

    cost, transpositions = search(0, frozenset())
    search.cache_clear()
    additions = len(only_a) + len(only_b) - 2 * transpositions
    involved = matches + transpositions + additions
    if involved == 0:
        return 1.0
    return 1.0 - cost / involved


# ---------------------------------------------------------------------------
# Exact binomial tail

def binom_tail_bruteforce(n: int, kmax: int) -> float:
    total = sum(math.comb(n, k) for k in range(kmax, n + 1))
    return total / 2**n

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from argmine.agreement import (
    Continuum,
    alpha_u,
    corpus_alpha_u,
    disagreement_correlates,
    document_continuum,
    fleiss_kappa,
    pearson_r,
    prob_confusion_matrix,
    readability,
    count_syllables,
    sentence_coverage_ratio,
)
from argmine.errors import DegenerateDataError

from helpers import annotation, make_corpus, make_doc, span
from oracles import alpha_u_bruteforce, fleiss_kappa_bruteforce


def random_units(rng, length, categories=("claim",), density=0.5, max_width=4):
    spans, t = [], 0
    while t < length - 1:
        if rng.random() < density:
            w = min(rng.randint(1, max_width), length - t)
            spans.append((t, t + w - 1, rng.choice(categories)))
            t += w + 1
        else:
            t += rng.randint(1, 2)
    return tuple(spans)


# ---------------------------------------------------------------------------
# alpha_u

def test_identical_unitizations_scores_exactly_one():
    units = {"A": ((0, 4, "claim"),), "B": ((0, 4, "claim"),)}
    assert alpha_u(Continuum(length=10, units=units), "claim") == 1.0


def test_alpha_u_matches_bruteforce_on_spec_example():
    units = {"A": ((0, 4, "claim"),), "B": ((2, 6, "claim"),)}
    continuum = Continuum(length=10, units=units)
    value = alpha_u(continuum, "claim")
    oracle = alpha_u_bruteforce(10, {k: list(v) for k, v in units.items()}, "claim")
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(0.3142857142857144, abs=1e-9)


def test_alpha_u_matches_bruteforce_on_random_continua():
    rng = random.Random(77)
    checked = 0
    for _ in range(25):
        length = rng.randint(5, 22)
        annotators = ("A", "B", "C")[: rng.randint(2, 3)]
        units = {a: random_units(rng, length, ("claim", "premise")) for a in annotators}
        continuum = Continuum(length=length, units=units)
        for category in ("claim", "premise", ["claim", "premise"]):
            try:
                value = alpha_u(continuum, category)
            except DegenerateDataError:
                continue
            oracle = alpha_u_bruteforce(
                length, {k: list(v) for k, v in units.items()}, category
            )
            assert value == pytest.approx(oracle, rel=1e-9, abs=1e-12)
            checked += 1
    assert checked >= 30


def test_alpha_u_single_annotator_errors():
    with pytest.raises(DegenerateDataError):
        alpha_u(Continuum(length=5, units={"A": ((0, 1, "claim"),)}), "claim")


def test_alpha_u_no_units_is_degenerate():
    units = {"A": (), "B": ()}
    with pytest.raises(DegenerateDataError):
        alpha_u(Continuum(length=5, units=units), "claim")


def test_alpha_u_near_zero_on_independent_random_annotations():
    rng = random.Random(3)
    units = {}
    for annotator in ("A", "B", "C"):
        spans = []
        occupied = set()
        for _ in range(40):
            w = rng.randint(3, 10)
            for _ in range(100):
                s = rng.randrange(0, 10_000 - w)
                if all(p not in occupied for p in range(s - 1, s + w + 1)):
                    spans.append((s, s + w - 1, "claim"))
                    occupied.update(range(s, s + w))
                    break
        units[annotator] = tuple(sorted(spans))
    value = alpha_u(Continuum(length=10_000, units=units), "claim")
    assert abs(value) < 0.05


def test_alpha_u_value_independent_of_document_order():
    rng = random.Random(21)
    docs = []
    for i in range(6):
        length = rng.randint(6, 15)
        docs.append(
            (length, {a: random_units(rng, length) for a in ("A", "B")})
        )

    def concatenated(order):
        offset = 0
        merged = {"A": [], "B": []}
        for idx in order:
            length, units = docs[idx]
            for a in merged:
                merged[a].extend((f + offset, l + offset, c) for f, l, c in units[a])
            offset += length
        return Continuum(length=offset, units={a: tuple(u) for a, u in merged.items()})

    orders = [list(range(6)), list(range(5, -1, -1)), [2, 0, 4, 1, 5, 3]]
    values = [alpha_u(concatenated(o), "claim") for o in orders]
    assert values[0] == pytest.approx(values[1], abs=1e-12)
    assert values[0] == pytest.approx(values[2], abs=1e-12)


def test_corpus_alpha_u_identical_sets():
    spans = [span("claim", 0, 2)]
    docs = [
        make_doc(
            f"d{i}",
            [["a", "b", "c", "d"]],
            annotations=[annotation("x", list(spans)), annotation("y", list(spans))],
        )
        for i in range(4)
    ]
    result = corpus_alpha_u(make_corpus(docs), ["x", "y"], "claim", n_perm=7, seed=1)
    assert result.value == 1.0
    assert result.std_error == 0.0
    assert result.n_permutations == 7


def test_corpus_alpha_u_low_spread_across_orders():
    rng = random.Random(5)
    docs = []
    for i in range(8):
        n = rng.randint(6, 14)
        words = [[f"w{j}" for j in range(n)]]
        sets = [
            annotation(a, [span("claim", f, l) for f, l, _ in random_units(rng, n)])
            for a in ("x", "y")
        ]
        docs.append(make_doc(f"d{i}", words, annotations=sets))
    result = corpus_alpha_u(make_corpus(docs), ["x", "y"], "claim", n_perm=20, seed=3)
    assert result.std_error < 0.01


# ---------------------------------------------------------------------------
# Fleiss' kappa

def test_fleiss_unanimous_two_categories():
    items = [["A", "A", "A"], ["B", "B", "B"], ["A", "A", "A"]]
    assert fleiss_kappa(items) == 1.0


def test_fleiss_hand_table():
    items = [["A", "A", "B"], ["A", "B", "B"], ["A", "A", "A"], ["B", "B", "B"]]
    value = fleiss_kappa(items)
    assert value == pytest.approx(fleiss_kappa_bruteforce(items), abs=1e-12)
    assert value == pytest.approx(1 / 3, abs=1e-9)


def test_fleiss_matches_bruteforce_on_random_tables():
    rng = random.Random(19)
    for _ in range(30):
        n_items = rng.randint(3, 12)
        n_raters = rng.randint(2, 5)
        cats = ["a", "b", "c"][: rng.randint(2, 3)]
        items = [[rng.choice(cats) for _ in range(n_raters)] for _ in range(n_items)]
        try:
            value = fleiss_kappa(items)
        except DegenerateDataError:
            continue
        assert value == pytest.approx(fleiss_kappa_bruteforce(items), abs=1e-9)


def test_fleiss_relabeling_invariance():
    rng = random.Random(23)
    items = [[rng.choice("abc") for _ in range(3)] for _ in range(10)]
    relabeled = [[{"a": "z", "b": "q", "c": "m"}[v] for v in item] for item in items]
    assert fleiss_kappa(items) == pytest.approx(fleiss_kappa(relabeled), abs=1e-12)


def test_fleiss_inconsistent_rater_counts():
    with pytest.raises(ValueError):
        fleiss_kappa([["A", "B"], ["A", "B", "B"]])


def test_fleiss_single_category_degenerate():
    with pytest.raises(DegenerateDataError):
        fleiss_kappa([["A", "A"], ["A", "A"]])


# ---------------------------------------------------------------------------
# Probabilistic confusion matrix

def test_confusion_identity_on_perfect_agreement():
    spans = [span("claim", 0, 1), span("premise", 2, 3)]
    doc = make_doc(
        "d",
        [["a", "b", "c", "d", "e"]],
        annotations=[annotation("x", list(spans)), annotation("y", list(spans))],
    )
    matrix = prob_confusion_matrix(make_corpus([doc]), ["x", "y"])
    for row_label, row in matrix.items():
        for col_label, p in row.items():
            assert p == (1.0 if row_label == col_label else 0.0)


def test_confusion_rows_sum_to_one():
    rng = random.Random(31)
    docs = []
    for i in range(5):
        n = rng.randint(5, 12)
        sets = [
            annotation(
                a, [span("claim" if rng.random() < 0.5 else "premise", f, l)
                    for f, l, _ in random_units(rng, n)]
            )
            for a in ("x", "y", "z")
        ]
        docs.append(make_doc(f"d{i}", [[f"w{j}" for j in range(n)]], annotations=sets))
    matrix = prob_confusion_matrix(make_corpus(docs), ["x", "y", "z"])
    assert matrix  # at least one row present
    for row in matrix.values():
        assert sum(row.values()) == pytest.approx(1.0, abs=1e-9)


def test_confusion_matches_hand_enumeration():
    # 2 tokens, 3 annotators: x claims token 0, y claims token 0, z marks nothing
    doc = make_doc(
        "d",
        [["a", "b"]],
        annotations=[
            annotation("x", [span("claim", 0, 0)]),
            annotation("y", [span("claim", 0, 0)]),
            annotation("z", []),
        ],
    )
    matrix = prob_confusion_matrix(make_corpus([doc]), ["x", "y", "z"])
    # token 0 ordered pairs: claim->claim x2, claim->none x2, none->claim x2;
    # token 1: none->none x6
    assert matrix["claim"]["claim"] == pytest.approx(2 / 4)
    assert matrix["claim"]["none"] == pytest.approx(2 / 4)
    assert matrix["none"]["claim"] == pytest.approx(2 / 8)
    assert matrix["none"]["none"] == pytest.approx(6 / 8)
    assert "rebuttal" not in matrix  # unused label has no row


# ---------------------------------------------------------------------------
# Readability

def test_readability_the_cat_sat():
    text = "The cat sat."
    tokens = [(0, 3), (4, 7), (8, 11), (11, 12)]
    sentences = [(0, 12)]
    scores = readability(text, tokens, sentences)
    # 3 words, 9 letters, 3 syllables, 1 sentence
    assert scores["ari"] == pytest.approx(4.71 * 3 + 0.5 * 3 - 21.43, abs=1e-9)
    assert scores["coleman_liau"] == pytest.approx(
        0.0588 * 300 - 0.296 * (100 / 3) - 15.8, abs=1e-9
    )
    assert scores["flesch"] == pytest.approx(206.835 - 1.015 * 3 - 84.6, abs=1e-9)
    assert scores["lix"] == pytest.approx(3.0, abs=1e-9)


def test_readability_scale_invariance():
    doc1 = make_doc("a", [["every", "school", "teaches", "children", "well"]])
    doc2 = make_doc(
        "b",
        [["every", "school", "teaches", "children", "well"]] * 2,
    )
    s1 = readability(doc1.text, doc1.tokens, doc1.sentences)
    s2 = readability(doc2.text, doc2.tokens, doc2.sentences)
    for key in s1:
        assert s1[key] == pytest.approx(s2[key], abs=1e-9)


def test_readability_empty_errors():
    with pytest.raises(ValueError):
        readability("", [], [])


def test_syllable_heuristic():
    # the stated rule: maximal vowel groups, minus a word-final 'e' group
    # unless that empties the word, floor one
    assert count_syllables("cat") == 1
    assert count_syllables("table") == 1   # groups a,e; final e dropped
    assert count_syllables("because") == 2  # e-au-e, final e dropped
    assert count_syllables("see") == 1
    assert count_syllables("the") == 1
    assert count_syllables("idea") == 2    # i-ea
    assert count_syllables("rhythm") == 1  # y as vowel
    assert count_syllables("tsk") == 1     # minimum one


# ---------------------------------------------------------------------------
# Correlations

def test_pearson_perfect():
    assert pearson_r([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
    assert pearson_r([1, 2, 3], [6, 4, 2]) == pytest.approx(-1.0)


def test_pearson_affine_invariance():
    rng = random.Random(41)
    x = [rng.random() for _ in range(10)]
    assert pearson_r(x, [3 * v + 2 for v in x]) == pytest.approx(1.0)
    assert pearson_r(x, [-0.5 * v + 1 for v in x]) == pytest.approx(-1.0)


def test_pearson_zero_variance_errors():
    with pytest.raises(DegenerateDataError):
        pearson_r([1, 1, 1], [1, 2, 3])


def test_sentence_coverage_ratio():
    doc = make_doc(
        "d",
        [["a", "b", "c"], ["d", "e"]],
        annotations=[annotation("x", [span("claim", 0, 2), span("premise", 3, 3)])],
    )
    # claim aligned at both ends; premise start aligned (3 starts sentence 2), end not
    assert sentence_coverage_ratio(doc) == pytest.approx(3 / 4)


def _two_annotator_doc(doc_id, n_sentences, agree: bool):
    words = [[f"w{k}" for k in range(4)] for _ in range(n_sentences)]
    n = 4 * n_sentences
    first = span("claim", 0, n // 2)
    second = span("claim", 0, n // 2) if agree else span("claim", n // 2 + 1, n - 1)
    return make_doc(
        doc_id,
        words,
        annotations=[annotation("x", [first]), annotation("y", [second])],
    )


def test_correlates_constructed_negative():
    # two distinct (length, alpha) points, two docs each: exactly linear
    docs = [
        _two_annotator_doc("a1", 2, agree=True),
        _two_annotator_doc("a2", 2, agree=True),
        _two_annotator_doc("b1", 6, agree=False),
        _two_annotator_doc("b2", 6, agree=False),
    ]
    result = disagreement_correlates(make_corpus(docs))
    assert result["n_documents"] == 4
    assert result["correlations"]["document_length"]["r"] == pytest.approx(-1.0, abs=1e-9)


def test_correlates_zero_variance_reported_per_cell():
    docs = [_two_annotator_doc(f"d{i}", 3, agree=True) for i in range(4)]
    result = disagreement_correlates(make_corpus(docs))
    assert "error" in result["correlations"]["document_length"]


def test_correlates_empty_subset_errors(tiny_corpus):
    with pytest.raises(ValueError):
        disagreement_correlates(tiny_corpus, topic="redshirting")

import random

import pytest

from argmine.encoding import (
    BIO_LABELS,
    SentenceLabeling,
    expand_to_tokens,
    oracle_eval,
    read_token_labels_tsv,
    sentence_approximate,
    tokens_from_annotation,
    write_token_labels_tsv,
)

from helpers import annotation, coverage_doc, make_corpus, make_doc, random_gold_doc, span


def test_eleven_labels_with_o_first():
    assert len(BIO_LABELS) == 11
    assert BIO_LABELS[0] == "O"
    assert set(l.split("-")[0] for l in BIO_LABELS[1:]) == {
        "Claim", "Premise", "Backing", "Rebuttal", "Refutation"
    }


# ---------------------------------------------------------------------------
# sentence_approximate

def test_component_continuing_from_previous_sentence_is_inside():
    doc = make_doc(
        "d",
        [["a", "b", "c"], ["d", "e", "f"]],
        gold=annotation("gold", [span("premise", 1, 4)]),
    )
    labeling = sentence_approximate(doc, doc.gold)
    assert labeling.labels == ("Premise-B", "Premise-I")


def test_no_logos_spans_gives_all_o():
    doc = make_doc("d", [["a", "b"], ["c"]], gold=annotation("gold", []))
    assert sentence_approximate(doc, doc.gold).labels == ("O", "O")


def test_longest_component_wins_sentence():
    # one 14-token sentence: claim over 5 tokens, premise over 8 tokens
    doc = make_doc(
        "d",
        [[f"w{i}" for i in range(14)]],
        gold=annotation("gold", [span("claim", 0, 4), span("premise", 5, 12)]),
    )
    assert sentence_approximate(doc, doc.gold).labels == ("Premise-B",)


def test_tie_goes_to_earliest_start():
    doc = make_doc(
        "d",
        [[f"w{i}" for i in range(7)]],
        gold=annotation("gold", [span("claim", 0, 2), span("premise", 3, 5)]),
    )
    assert sentence_approximate(doc, doc.gold).labels == ("Claim-B",)


def test_pathos_spans_are_ignored():
    doc = make_doc(
        "d",
        [["a", "b", "c"]],
        gold=annotation("gold", [span("appeal_to_emotion", 0, 2)]),
    )
    assert sentence_approximate(doc, doc.gold).labels == ("O",)


# ---------------------------------------------------------------------------
# expand_to_tokens

def test_expand_begin_label():
    doc = make_doc("d", [["a", "b", "c", "d"]])
    labeling = SentenceLabeling(doc_id="d", labels=("Claim-B",))
    assert expand_to_tokens(doc, labeling) == ["Claim-B", "Claim-I", "Claim-I", "Claim-I"]


def test_expand_all_o():
    doc = make_doc("d", [["a", "b"], ["c"]])
    labeling = SentenceLabeling(doc_id="d", labels=("O", "O"))
    assert expand_to_tokens(doc, labeling) == ["O", "O", "O"]


def test_expand_inside_label_spreads_unchanged():
    doc = make_doc("d", [["a", "b", "c"]])
    labeling = SentenceLabeling(doc_id="d", labels=("Premise-I",))
    assert expand_to_tokens(doc, labeling) == ["Premise-I"] * 3


def test_expand_length_mismatch_raises():
    doc = make_doc("d", [["a", "b"]])
    with pytest.raises(ValueError):
        expand_to_tokens(doc, SentenceLabeling(doc_id="d", labels=("O", "O")))


def test_expand_output_length_always_token_count():
    rng = random.Random(3)
    for i in range(25):
        doc = random_gold_doc(rng, f"d{i}")
        labeling = sentence_approximate(doc, doc.gold)
        assert len(expand_to_tokens(doc, labeling)) == doc.n_tokens


# ---------------------------------------------------------------------------
# tokens_from_annotation

def test_tokens_from_annotation_basic():
    doc = make_doc(
        "d", [[f"w{i}" for i in range(6)]], gold=annotation("gold", [span("claim", 2, 4)])
    )
    assert tokens_from_annotation(doc, doc.gold) == [
        "O", "O", "Claim-B", "Claim-I", "Claim-I", "O",
    ]


def test_adjacent_premises_stay_distinguishable():
    doc = make_doc(
        "d",
        [[f"w{i}" for i in range(6)]],
        gold=annotation("gold", [span("premise", 0, 2), span("premise", 3, 5)]),
    )
    assert tokens_from_annotation(doc, doc.gold) == [
        "Premise-B", "Premise-I", "Premise-I", "Premise-B", "Premise-I", "Premise-I",
    ]


def test_empty_annotation_all_o():
    doc = make_doc("d", [["a", "b"]], gold=annotation("gold", []))
    assert tokens_from_annotation(doc, doc.gold) == ["O", "O"]


# ---------------------------------------------------------------------------
# oracle

def test_oracle_perfect_on_aligned_spans():
    # the coverage doc guarantees all 11 classes occur, which the 11-way
    # macro average needs to reach 1.0
    rng = random.Random(1)
    docs = [coverage_doc("cov")] + [
        random_gold_doc(rng, f"d{i}", sentence_aligned=True) for i in range(10)
    ]
    core = oracle_eval(make_corpus(docs))
    assert core.macro_f1 == 1.0
    assert core.accuracy == 1.0


def test_oracle_partial_sentence_loss():
    # one sentence of 4 tokens with a claim over tokens 1-2: the sentence label
    # claims all 4 tokens, so only the one matching Claim-I token survives
    doc = make_doc(
        "d", [["a", "b", "c", "d"]], gold=annotation("gold", [span("claim", 1, 2)])
    )
    core = oracle_eval(make_corpus([doc]))
    assert core.accuracy == pytest.approx(1 / 4)


def test_alignment_fixpoint():
    rng = random.Random(9)
    for i in range(20):
        doc = random_gold_doc(rng, f"d{i}", sentence_aligned=True)
        expanded = expand_to_tokens(doc, sentence_approximate(doc, doc.gold))
        assert expanded == tokens_from_annotation(doc, doc.gold)


def test_begin_count_never_exceeds_component_count():
    rng = random.Random(13)
    for i in range(30):
        doc = random_gold_doc(rng, f"d{i}")
        labels = sentence_approximate(doc, doc.gold).labels
        n_begin = sum(1 for l in labels if l.endswith("-B"))
        assert n_begin <= len(doc.gold.spans_in_dimension("logos"))


# ---------------------------------------------------------------------------
# TSV dump

def test_tsv_round_trip(tmp_path):
    rows = [("d1", 0, "O", "Claim-B"), ("d1", 1, "Claim-B", "Claim-I")]
    path = tmp_path / "labels.tsv"
    write_token_labels_tsv(path, rows)
    assert read_token_labels_tsv(path) == rows
    text = path.read_text(encoding="utf-8")
    assert text.startswith("doc_id\ttoken_index\tgold_label\tpredicted_label\n")

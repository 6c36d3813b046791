import random

import pytest

from argmine.corpus import PersuasiveLabel

from helpers import annotation, make_corpus, make_doc, span


@pytest.fixture
def small_doc():
    """Two paragraphs, three sentences, a claim and a premise in gold."""
    return make_doc(
        "d1",
        [
            ["I", "think", "schools", "are", "fine"],
            ["because", "teachers", "care", "a", "lot"],
            ["my", "kids", "did", "well"],
        ],
        paragraph_sizes=[2, 1],
        gold=annotation("gold", [span("claim", 0, 4), span("premise", 5, 9)]),
    )


@pytest.fixture
def triple_annotated_doc():
    spans_a = [span("claim", 0, 4), span("premise", 5, 9)]
    spans_b = [span("claim", 0, 4), span("premise", 5, 9)]
    spans_c = [span("claim", 0, 4), span("backing", 10, 13)]
    return make_doc(
        "d2",
        [
            ["I", "think", "schools", "are", "fine"],
            ["because", "teachers", "care", "a", "lot"],
            ["my", "kids", "did", "well"],
        ],
        annotations=[
            annotation("ann1", spans_a),
            annotation("ann2", spans_b),
            annotation("ann3", spans_c),
        ],
    )


@pytest.fixture
def tiny_corpus(small_doc):
    other = make_doc(
        "d2",
        [["prayer", "in", "school", "is", "wrong"], ["keep", "church", "away"]],
        topic="prayer-in-schools",
        register="forumpost",
        gold=annotation("gold", [span("claim", 0, 4)]),
        persuasive=PersuasiveLabel(label=True, votes=(("a1", True), ("a2", True), ("a3", False))),
    )
    return make_corpus([small_doc, other])

"""Builders for synthetic documents and corpora used across the test suite."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from argmine.corpus import (
    AnnotationSet,
    ComponentSpan,
    Corpus,
    Document,
    LOGOS_TYPES,
    PersuasiveLabel,
    TOPICS,
    build_document,
)


def span(component_type: str, first: int, last: int, summary=None, implicit=False) -> ComponentSpan:
    dimension = "pathos" if component_type == "appeal_to_emotion" else "logos"
    return ComponentSpan(
        component_type=component_type,
        dimension=dimension,
        first_token=first,
        last_token=last,
        summary=summary,
        implicit=implicit,
    )


def annotation(annotator_id: str, spans: Sequence[ComponentSpan], stance=None) -> AnnotationSet:
    return AnnotationSet(
        annotator_id=annotator_id, spans=tuple(spans), implicit_claim_stance=stance
    )


def make_doc(
    doc_id: str,
    sentences: Sequence[Sequence[str]],
    topic: str = "homeschooling",
    register: str = "comment",
    paragraph_sizes: Optional[Sequence[int]] = None,
    annotations: Sequence[AnnotationSet] = (),
    gold: Optional[AnnotationSet] = None,
    persuasive: Optional[PersuasiveLabel] = None,
) -> Document:
    """Build a document from per-sentence word lists; paragraph_sizes gives the
    number of sentences per paragraph (default: one paragraph)."""
    if paragraph_sizes is None:
        paragraph_sizes = [len(sentences)]
    assert sum(paragraph_sizes) == len(sentences)

    text_parts: list[str] = []
    tokens: list[tuple[int, int]] = []
    sentence_offsets: list[tuple[int, int]] = []
    paragraph_offsets: list[tuple[int, int]] = []
    pos = 0
    sent_index = 0
    for p_size in paragraph_sizes:
        if text_parts:
            text_parts.append("\n\n")
            pos += 2
        par_start = pos
        for si in range(p_size):
            if si > 0:
                text_parts.append(" ")
                pos += 1
            sent_start = pos
            words = sentences[sent_index]
            sent_index += 1
            for wi, word in enumerate(words):
                if wi > 0:
                    text_parts.append(" ")
                    pos += 1
                tokens.append((pos, pos + len(word)))
                text_parts.append(word)
                pos += len(word)
            sentence_offsets.append((sent_start, pos))
        paragraph_offsets.append((par_start, pos))
    return build_document(
        doc_id=doc_id,
        topic=topic,
        register=register,
        text="".join(text_parts),
        paragraphs=paragraph_offsets,
        sentences=sentence_offsets,
        tokens=tokens,
        annotations=annotations,
        gold=gold,
        persuasive=persuasive,
    )


def make_corpus(documents, name="test", version="1") -> Corpus:
    return Corpus(name=name, version=version, documents=tuple(documents))


def random_sentence(rng: random.Random, n_words: int, vocab_size: int = 50, prefix: str = "w") -> list[str]:
    return [f"{prefix}{rng.randrange(vocab_size):03d}" for _ in range(n_words)]


def coverage_doc(doc_id: str, topic: str = "homeschooling") -> Document:
    """Sentence-aligned document whose gold annotation contains every
    component type over a multi-token sentence, so all 11 token classes occur."""
    sentences = [[f"{t}{i}" for i in range(3)] for t in "abcdef"]
    doc = make_doc(doc_id, sentences, topic=topic)
    spans = [
        span(ctype, doc.sentences[k].token_range[0], doc.sentences[k].token_range[1])
        for k, ctype in enumerate(LOGOS_TYPES)
    ]
    return make_doc(doc_id, sentences, topic=topic, gold=annotation("gold", spans))


def random_gold_doc(
    rng: random.Random,
    doc_id: str,
    topic: str = "homeschooling",
    n_sentences: Optional[int] = None,
    sentence_aligned: bool = False,
) -> Document:
    """Random document with a random gold annotation; with sentence_aligned,
    every gold span covers whole sentences."""
    n_sentences = n_sentences or rng.randint(1, 6)
    sentences = [random_sentence(rng, rng.randint(2, 6)) for _ in range(n_sentences)]
    doc = make_doc(doc_id, sentences, topic=topic)
    spans = []
    if sentence_aligned:
        k = 0
        while k < n_sentences:
            if rng.random() < 0.6:
                width = min(rng.randint(1, 2), n_sentences - k)
                first = doc.sentences[k].token_range[0]
                last = doc.sentences[k + width - 1].token_range[1]
                spans.append(span(rng.choice(LOGOS_TYPES), first, last))
                k += width
            else:
                k += 1
    else:
        t = 0
        while t < doc.n_tokens:
            if rng.random() < 0.5:
                width = min(rng.randint(1, 5), doc.n_tokens - t)
                spans.append(span(rng.choice(LOGOS_TYPES), t, t + width - 1))
                t += width + rng.randint(0, 2)
            else:
                t += rng.randint(1, 3)
    gold = annotation("gold", spans)
    return make_doc(doc_id, sentences, topic=topic, gold=gold)

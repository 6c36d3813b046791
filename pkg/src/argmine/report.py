"""Human-readable experiment reports: metric tables plus side-by-side
rendering of gold and predicted argument components per document."""

from __future__ import annotations

import html as _html
from typing import Mapping, Optional, Sequence

from .corpus import Corpus, Document
from .encoding import BIO_LABELS
from .evaluation import EvalReport, units_from_token_labels

_TYPE_MARKS = {
    "claim": "Claim",
    "premise": "Premise",
    "backing": "Backing",
    "rebuttal": "Rebuttal",
    "refutation": "Refutation",
    "appeal_to_emotion": "AppealToEmotion",
}


def _units_from_spans(doc: Document) -> list[tuple[int, int, str]]:
    if doc.gold is None:
        return []
    return [
        (s.first_token, s.last_token, s.component_type)
        for s in doc.gold.spans_in_dimension("logos")
    ]


def render_spans(doc: Document, units: Sequence[tuple[int, int, str]]) -> str:
    """Document text with inline component markers around annotated spans."""
    opens: dict[int, list[str]] = {}
    closes: dict[int, list[str]] = {}
    for first, last, ctype in units:
        mark = _TYPE_MARKS.get(ctype, ctype)
        opens.setdefault(first, []).append(f"[{mark}> ")
        closes.setdefault(last, []).append(f" <{mark}]")
    parts = []
    cursor = 0
    for tok in doc.tokens:
        parts.append(doc.text[cursor:tok.start])
        for mark in opens.get(tok.index, ()):
            parts.append(mark)
        parts.append(doc.text[tok.start:tok.end])
        for mark in closes.get(tok.index, ()):
            parts.append(mark)
        cursor = tok.end
    parts.append(doc.text[cursor:])
    return "".join(parts)


def _metrics_table(reports: Mapping[str, EvalReport]) -> list[str]:
    configs = sorted(reports)
    lines = ["| Metric | " + " | ".join(configs) + " |",
             "|---" * (len(configs) + 1) + "|"]
    lines.append(
        "| Macro-F1 | " + " | ".join(f"{reports[c].core.macro_f1:.3f}" for c in configs) + " |"
    )
    lines.append(
        "| Accuracy | " + " | ".join(f"{reports[c].core.accuracy:.3f}" for c in configs) + " |"
    )
    for label in BIO_LABELS:
        lines.append(
            f"| {label} | "
            + " | ".join(f"{reports[c].core.per_class[label]['f1']:.3f}" for c in configs)
            + " |"
        )
    return lines


def _summary_table(rows: Mapping[str, EvalReport]) -> list[str]:
    lines = [
        "| System | Macro-F1 | Alpha-U | Boundary similarity |",
        "|---|---|---|---|",
    ]
    for name, report in rows.items():
        alpha = f"{report.alpha_u.value:.3f}" if report.alpha_u is not None else "n/a"
        boundary = (
            f"{report.boundary_similarity:.3f}" if report.boundary_similarity is not None else "n/a"
        )
        lines.append(f"| {name} | {report.core.macro_f1:.3f} | {alpha} | {boundary} |")
    return lines


def _significance_table(reports: Mapping[str, EvalReport]) -> list[str]:
    for report in reports.values():
        significance = report.metadata.get("significance")
        if significance:
            lines = ["| Pair | p (exact paired test) |", "|---|---|"]
            for pair, p in sorted(significance.items()):
                lines.append(f"| {pair} | {p:.3g} |")
            return lines
    return []


def render_report(
    reports: Mapping[str, EvalReport],
    corpus: Corpus,
    predictions: Optional[Mapping[str, Sequence[str]]] = None,
    fmt: str = "md",
    summary_rows: Optional[Mapping[str, EvalReport]] = None,
    max_documents: Optional[int] = None,
) -> str:
    """Markdown (or minimally wrapped HTML) report with metric tables and
    per-document gold/predicted components side by side."""
    lines = ["# Argument component identification report", ""]

    if reports:
        lines.append("## Results by feature-set combination")
        lines.append("")
        lines.extend(_metrics_table(reports))
        lines.append("")
        sig = _significance_table(reports)
        if sig:
            lines.append("## Pairwise significance")
            lines.append("")
            lines.extend(sig)
            lines.append("")

    if summary_rows:
        lines.append("## Summary metrics")
        lines.append("")
        lines.extend(_summary_table(summary_rows))
        lines.append("")

    if predictions:
        lines.append("## Gold and predicted components side by side")
        lines.append("")
        shown = 0
        for doc in corpus.documents:
            if doc.doc_id not in predictions:
                continue
            if max_documents is not None and shown >= max_documents:
                break
            shown += 1
            lines.append(f"### {doc.doc_id} ({doc.register}, {doc.topic})")
            lines.append("")
            lines.append("**Gold:**")
            lines.append("")
            lines.append("> " + render_spans(doc, _units_from_spans(doc)).replace("\n", "\n> "))
            lines.append("")
            lines.append("**Predicted:**")
            lines.append("")
            predicted_units = units_from_token_labels(list(predictions[doc.doc_id]))
            lines.append("> " + render_spans(doc, predicted_units).replace("\n", "\n> "))
            lines.append("")

    text = "\n".join(lines) + "\n"
    if fmt == "md":
        return text
    if fmt == "html":
        return (
            "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
            "<title>Argument mining report</title></head>\n"
            "<body><pre>\n" + _html.escape(text) + "</pre></body></html>\n"
        )
    raise ValueError(f"unsupported report format '{fmt}'")

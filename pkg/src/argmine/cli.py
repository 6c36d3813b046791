"""Command-line entry point wiring validation, statistics, gold construction,
agreement, training, prediction, the experiment scenarios, and reporting.

Options may also come from a plain-text config file (INI sections with
``key = value`` entries, keys named like the flags); explicit flags override
the file.  Every run that writes outputs also writes a run-metadata JSON with
the resolved configuration, seeds, and resource hashes.  Exit codes: 0 on
success, 1 on validation or runtime failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import datetime
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import agreement as m_agreement
from . import corpus as m_corpus
from . import encoding as m_encoding
from . import evaluation as m_evaluation
from . import features as m_features
from . import labeler as m_labeler
from . import persuasiveness as m_persuasiveness
from . import report as m_report
from .errors import ArgmineError
from .util import sha256_file


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _emit(args, payload: dict, default_name: str) -> None:
    text = m_corpus.canonical_json(payload)
    if getattr(args, "out", None):
        out = Path(args.out)
        if out.suffix != ".json" and (out.is_dir() or not out.suffix):
            out = out / default_name
        _write_text(out, text)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _run_metadata(args, extra: Optional[dict] = None) -> dict:
    resolved = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in {"func", "config"} and value is not None
    }
    hashes = {}
    for key in ("corpus", "embeddings", "layers", "model", "predictions", "raw_texts"):
        path = getattr(args, key, None)
        if path and Path(path).is_file():
            hashes[key] = sha256_file(path)
    meta = {
        "command": args.command,
        "config": resolved,
        "resource_hashes": hashes,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        meta.update(extra)
    return meta


def _write_metadata(args, directory: Path, extra: Optional[dict] = None) -> None:
    _write_text(directory / "run-metadata.json", m_corpus.canonical_json(_run_metadata(args, extra)))


def _load_resources(args) -> m_evaluation.ExperimentResources:
    embeddings = m_features.load_embeddings(args.embeddings) if getattr(args, "embeddings", None) else None
    layers = m_features.load_layers(args.layers) if getattr(args, "layers", None) else None
    return m_evaluation.ExperimentResources(embeddings=embeddings, layers=layers)


def _annotator_ids(corpus: m_corpus.Corpus) -> list[str]:
    ids = sorted({a.annotator_id for doc in corpus.documents for a in doc.annotations})
    return ids


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_validate(args) -> int:
    try:
        corpus = m_corpus.parse_corpus(args.corpus, validate=False)
    except ArgmineError as exc:
        print(f"error: {exc}")
        return 1
    findings = m_corpus.validate_corpus(corpus)
    for finding in findings:
        print(finding)
    errors = sum(1 for f in findings if f.severity == "error")
    warnings = sum(1 for f in findings if f.severity == "warning")
    print(f"{errors} errors, {warnings} warnings")
    return 1 if errors else 0


def _cmd_stats(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    stats = m_corpus.corpus_statistics(corpus)
    _emit(args, stats, "stats.json")
    return 0


def _cmd_gold(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus, validate=False)
    rebuilt = []
    unresolved_report = {}
    skipped = []
    for doc in corpus.documents:
        if len(doc.annotations) < 3:
            skipped.append(doc.doc_id)
            rebuilt.append(doc)
            continue
        gold, unresolved = m_corpus.build_gold_majority(doc)
        rebuilt.append(dataclasses.replace(doc, gold=gold))
        if unresolved:
            unresolved_report[doc.doc_id] = [
                {"dimension": u.dimension, "first_token": u.first_token, "last_token": u.last_token}
                for u in unresolved
            ]
    out = Path(args.out) if args.out else Path("gold-corpus.json")
    new_corpus = m_corpus.Corpus(name=corpus.name, version=corpus.version, documents=tuple(rebuilt))
    m_corpus.serialize_corpus(new_corpus, out)
    _write_text(
        out.with_suffix(".unresolved.json"), m_corpus.canonical_json(unresolved_report)
    )
    _write_metadata(args, out.parent, {"skipped_documents": skipped})
    print(
        f"wrote {out} ({len(rebuilt) - len(skipped)} documents voted, "
        f"{len(skipped)} skipped with <3 annotation sets, "
        f"{len(unresolved_report)} documents carry unresolved regions)"
    )
    return 0


def _cmd_agreement(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    if args.topic or args.register:
        docs = [
            d
            for d in corpus.documents
            if (not args.topic or d.topic == args.topic)
            and (not args.register or d.register == args.register)
        ]
        corpus = m_corpus.Corpus(name=corpus.name, version=corpus.version, documents=tuple(docs))
    subset = {"topic": args.topic, "register": args.register}

    annotators = args.annotators.split(",") if args.annotators else _annotator_ids(corpus)

    if args.metric == "alpha-u":
        if not args.category:
            print("error: --category is required for alpha-u")
            return 2
        category: object = args.category
        if args.category in ("joint", "joint-logos"):
            category = list(m_corpus.LOGOS_TYPES)
        elif "," in args.category:
            category = args.category.split(",")
        result = m_agreement.corpus_alpha_u(
            corpus, annotators, category, n_perm=args.n_perm, seed=args.seed
        )
        payload = {
            "metric": "alpha-u",
            "category": args.category,
            "value": result.value,
            "std_error": result.std_error,
            "n_perm": result.n_permutations,
            "seed": args.seed,
            "subset": subset,
        }
    elif args.metric == "fleiss-kappa":
        items = [
            [vote for _, vote in doc.persuasive.votes]
            for doc in corpus.documents
            if doc.persuasive is not None and doc.persuasive.votes
        ]
        value = m_agreement.fleiss_kappa([[str(v) for v in item] for item in items])
        payload = {
            "metric": "fleiss-kappa",
            "category": "persuasive",
            "value": value,
            "std_error": 0.0,
            "n_perm": 1,
            "seed": args.seed,
            "subset": subset,
            "n_items": len(items),
        }
    elif args.metric == "confusion":
        matrix = m_agreement.prob_confusion_matrix(corpus, annotators)
        payload = {
            "metric": "confusion",
            "category": "logos+none",
            "value": matrix,
            "subset": subset,
        }
    elif args.metric == "correlates":
        payload = {
            "metric": "correlates",
            "subset": subset,
            "value": m_agreement.disagreement_correlates(
                corpus, topic=args.topic, register=args.register
            ),
        }
    else:
        print(f"error: unknown metric '{args.metric}'")
        return 2
    _emit(args, payload, "agreement.json")
    return 0


def _cmd_train(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    docs = [d for d in corpus.documents if d.gold is not None]
    if not docs:
        print("error: no documents with gold annotations")
        return 1
    resources = _load_resources(args)
    train_ids = [d.doc_id for d in docs]
    extractor = m_features.SentenceFeatureExtractor(
        feature_sets=args.features,
        window=args.window,
        min_count=args.min_count,
        embeddings=resources.embeddings,
        layers=resources.layers,
        seed=args.seed,
    )
    extractor.fit(corpus, train_ids)
    X = [extractor.transform(d) for d in docs]
    y = [list(m_encoding.sentence_approximate(d, d.gold).labels) for d in docs]
    labeler = m_labeler.ArgumentComponentLabeler(epochs=args.epochs, seed=args.seed)
    labeler.fit(X, y, feature_config=extractor.config_.to_dict())
    out = Path(args.out) if args.out else Path("model.json")
    m_labeler.save_model(labeler.model_, out)
    _write_metadata(args, out.parent, {"degraded_features": sorted(extractor.degraded_)})
    print(f"wrote {out}")
    return 0


def _cmd_predict(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    model = m_labeler.load_model(args.model)
    resources = _load_resources(args)
    config = m_features.FeatureConfig.from_dict(model.feature_config)
    wanted = [d.doc_id for d in corpus.documents if d.gold is not None] or [
        d.doc_id for d in corpus.documents
    ]
    vocabulary = None
    if 0 in config.feature_sets:
        vocabulary = m_features.build_vocabulary(corpus, wanted, min_count=config.min_count)
    bundle = m_features.Resources(
        feature_sets=config.feature_sets,
        vocabulary=vocabulary,
        embeddings=resources.embeddings,
        layers=resources.layers,
    )
    rows = []
    for doc in corpus.documents:
        _, token_labels = m_labeler.predict_document(model, doc, bundle)
        gold = (
            m_encoding.tokens_from_annotation(doc, doc.gold)
            if doc.gold is not None
            else ["O"] * doc.n_tokens
        )
        rows.extend(
            (doc.doc_id, t, gold[t], token_labels[t]) for t in range(doc.n_tokens)
        )
    out = Path(args.out) if args.out else Path("predictions.tsv")
    out.parent.mkdir(parents=True, exist_ok=True)
    m_encoding.write_token_labels_tsv(out, rows)
    _write_metadata(args, out.parent)
    print(f"wrote {out}")
    return 0


def _predictions_from_tsv(corpus, path) -> dict[str, list[str]]:
    rows = m_encoding.read_token_labels_tsv(path)
    predictions: dict[str, dict[int, str]] = {}
    for doc_id, index, _, predicted in rows:
        predictions.setdefault(doc_id, {})[index] = predicted
    out = {}
    for doc in corpus.documents:
        if doc.doc_id in predictions:
            per_doc = predictions[doc.doc_id]
            out[doc.doc_id] = [per_doc.get(t, "O") for t in range(doc.n_tokens)]
    return out


def _cmd_eval(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    if not args.predictions:
        print("error: --predictions is required (run `argmine predict` first)")
        return 2
    predictions = _predictions_from_tsv(corpus, args.predictions)
    report = m_evaluation._assemble_report(
        corpus,
        predictions,
        metadata={"scenario": "eval", "seed": args.seed},
        alpha_n_perm=args.n_perm,
        alpha_seed=args.seed,
    )
    _emit(args, report.to_json(), "eval.json")
    return 0


def _cmd_xval(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    resources = _load_resources(args)
    configs = args.features.split(",")
    out_dir = Path(args.out) if args.out else Path("xval-out")
    common = dict(
        seed=args.seed,
        epochs=args.epochs,
        window=args.window,
        min_count=args.min_count,
        resources=resources,
        workers=args.workers,
    )
    if args.scenario == "all":
        reports = m_evaluation.run_crossval(corpus, configs, k=args.folds, **common)
        for config, report in reports.items():
            _write_text(out_dir / f"all-{config}.json", m_corpus.canonical_json(report.to_json()))
    elif args.scenario == "in-domain":
        result = m_evaluation.run_indomain(corpus, configs, k=args.folds, **common)
        for topic, reports in result["per_topic"].items():
            for config, report in reports.items():
                _write_text(
                    out_dir / f"in-domain-{topic}-{config}.json",
                    m_corpus.canonical_json(report.to_json()),
                )
        for config, report in result["aggregated"].items():
            _write_text(
                out_dir / f"in-domain-aggregated-{config}.json",
                m_corpus.canonical_json(report.to_json()),
            )
        if result["skipped_topics"]:
            _write_text(
                out_dir / "in-domain-skipped.json",
                m_corpus.canonical_json(result["skipped_topics"]),
            )
    elif args.scenario == "cross-domain":
        result = m_evaluation.run_crossdomain(corpus, configs, **common)
        for topic, reports in result["per_topic"].items():
            for config, report in reports.items():
                _write_text(
                    out_dir / f"cross-domain-{topic}-{config}.json",
                    m_corpus.canonical_json(report.to_json()),
                )
        for config, report in result["aggregated"].items():
            _write_text(
                out_dir / f"cross-domain-aggregated-{config}.json",
                m_corpus.canonical_json(report.to_json()),
            )
    else:
        print(f"error: unknown scenario '{args.scenario}'")
        return 2
    _write_metadata(args, out_dir)
    print(f"wrote reports to {out_dir}")
    return 0


def _cmd_persuasive(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    scores = m_persuasiveness.crossval_persuasive(
        corpus, k=args.folds, seed=args.seed, epochs=args.epochs
    )
    _emit(args, scores, "persuasive.json")
    return 0


def _cmd_report(args) -> int:
    corpus = m_corpus.parse_corpus(args.corpus)
    predictions = (
        _predictions_from_tsv(corpus, args.predictions) if args.predictions else {}
    )
    reports = {}
    summary = {}
    if predictions:
        system = m_evaluation._assemble_report(
            corpus,
            predictions,
            metadata={"scenario": "report", "seed": args.seed},
            alpha_n_perm=args.n_perm,
            alpha_seed=args.seed,
        )
        reports["system"] = system
        summary["system"] = system
    human = m_evaluation.human_performance(corpus)
    if human is not None:
        summary["human"] = human
    text = m_report.render_report(
        reports,
        corpus,
        predictions=predictions or None,
        fmt=args.format,
        summary_rows=summary or None,
        max_documents=args.max_documents,
    )
    suffix = "html" if args.format == "html" else "md"
    out = Path(args.out) if args.out else Path(f"report.{suffix}")
    _write_text(out, text)
    _write_metadata(args, out.parent)
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------
# Parser

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True, help="corpus JSON file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="output file or directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argmine",
        description="Argument component identification and annotation analysis toolkit",
    )
    parser.add_argument("--config", default=None, help="INI config file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a corpus file against all invariants")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics incl. sentence class distribution")
    _add_common(p)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gold", help="rebuild gold annotations by token-level majority vote")
    _add_common(p)
    p.set_defaults(func=_cmd_gold)

    p = sub.add_parser("agreement", help="agreement and disagreement diagnostics")
    _add_common(p)
    p.add_argument("--metric", choices=("alpha-u", "fleiss-kappa", "confusion", "correlates"),
                   default="alpha-u")
    p.add_argument("--category", default=None,
                   help="component type, comma list, or 'joint-logos'")
    p.add_argument("--n-perm", dest="n_perm", type=int, default=100)
    p.add_argument("--annotators", default=None, help="comma-separated annotator ids")
    p.add_argument("--topic", default=None)
    p.add_argument("--register", default=None)
    p.set_defaults(func=_cmd_agreement)

    p = sub.add_parser("train", help="train a sequence labeler on the gold annotations")
    _add_common(p)
    p.add_argument("--features", default="0", help="feature-set combination, e.g. 01234")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--min-count", dest="min_count", type=int, default=2)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--layers", default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="label a corpus with a trained model")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--layers", default=None)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="score a prediction dump against gold")
    _add_common(p)
    p.add_argument("--predictions", default=None, help="TSV from `argmine predict`")
    p.add_argument("--n-perm", dest="n_perm", type=int, default=10)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("xval", help="cross-validation experiment scenarios")
    _add_common(p)
    p.add_argument("--scenario", choices=("all", "in-domain", "cross-domain"), default="all")
    p.add_argument("--features", default="0", help="comma-separated combinations, e.g. 0,01234")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--min-count", dest="min_count", type=int, default=2)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--layers", default=None)
    p.set_defaults(func=_cmd_xval)

    p = sub.add_parser("persuasive", help="persuasiveness document classifier cross validation")
    _add_common(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--epochs", type=int, default=10)
    p.set_defaults(func=_cmd_persuasive)

    p = sub.add_parser("report", help="render metric tables and side-by-side annotations")
    _add_common(p)
    p.add_argument("--predictions", default=None)
    p.add_argument("--format", choices=("json", "md", "html"), default="md")
    p.add_argument("--n-perm", dest="n_perm", type=int, default=10)
    p.add_argument("--max-documents", dest="max_documents", type=int, default=None)
    p.set_defaults(func=_cmd_report)

    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Prepend defaults from an INI config file; explicit flags still win."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    path = argv[at + 1]
    ini = configparser.ConfigParser()
    ini.read(path, encoding="utf-8")
    values: dict[str, str] = {}
    for section in ini.sections():
        values.update(dict(ini[section]))
    values.update(dict(ini.defaults()))
    extra: list[str] = []
    for key, value in values.items():
        flag = "--" + key.replace("_", "-")
        if flag not in argv:
            extra.extend([flag, value])
    # insert config-derived options right after the subcommand
    for i, token in enumerate(argv):
        if not token.startswith("-") and i > 0:
            return argv[: i + 1] + extra + argv[i + 1:]
    return argv + extra


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv = _apply_config_file(parser, argv)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ArgmineError as exc:
        print(f"error: {exc}")
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

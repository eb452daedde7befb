"""Command-line entry point wiring the whole pipeline."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import evaluation, plots, synth
from .corpus import load_corpus, load_stoplist
from .errors import (
    ClassificationError,
    ConfigError,
    DataError,
    NumericError,
    SumrulesError,
    TrainingError,
)
from .features import dump_vectors_tsv, load_vectors_tsv
from .labeling import DEFAULT_NEG_RATIO, deduplicate_and_balance
from .learners import RuleSet, format_rules, load_model, save_model
from .pipeline import (
    Resources,
    build_keyword_maps,
    build_user_topic,
    prepare_resources,
)
from .summarizer import summarize
from .termstats import (
    DEFAULT_COOC_MIN_COUNT,
    DEFAULT_COOC_MIN_SCORE,
    DEFAULT_COOC_WINDOW,
    CooccurrenceTable,
    SynonymLexicon,
)
from .userfocus import (
    DEFAULT_DECAY,
    DEFAULT_ITERATIONS,
    DEFAULT_TOP_K_PER_DOC,
    DEFAULT_TOPIC_SIGMA,
    KeywordMap,
)

log = logging.getLogger("sumrules")


@dataclass
class RunConfig:
    corpus_dir: str = "corpus"
    stoplist_path: str | None = None
    synonyms_path: str | None = None
    compression: float = 0.20
    learner: str = "tree"
    mode: str = "generic"
    interest_file: str | None = None
    seed: int = 0
    neg_ratio: float = DEFAULT_NEG_RATIO
    cooc_window: int = DEFAULT_COOC_WINDOW
    cooc_min_count: int = DEFAULT_COOC_MIN_COUNT
    cooc_min_score: float = DEFAULT_COOC_MIN_SCORE
    decay: float = DEFAULT_DECAY
    iterations: int = DEFAULT_ITERATIONS
    topic_sigma: float = DEFAULT_TOPIC_SIGMA
    topic_top_k: int = DEFAULT_TOP_K_PER_DOC
    output_dir: str = "out"

    def validate(self) -> None:
        if not 0.0 < self.compression <= 1.0:
            raise ConfigError(f"compression must be in (0, 1], got {self.compression}")
        if self.mode not in ("generic", "user"):
            raise ConfigError(f"mode must be 'generic' or 'user', got {self.mode!r}")
        if self.learner not in evaluation.LEARNERS:
            raise ConfigError(f"learner must be one of {evaluation.LEARNERS}, got {self.learner!r}")
        if self.mode == "user" and not self.interest_file:
            raise ConfigError("mode=user requires --interest-file")

    def user_params(self) -> dict:
        return {
            "top_k_per_doc": self.topic_top_k,
            "threshold_sigma": self.topic_sigma,
            "decay": self.decay,
            "iterations": self.iterations,
        }


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def load_config_file(path: str) -> dict:
    """`key = value` per line; '#' comments; keys match RunConfig fields."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        ftype = _FIELD_TYPES[key]
        if "int" in str(ftype):
            values[key] = int(raw)
        elif "float" in str(ftype):
            values[key] = float(raw)
        else:
            values[key] = raw
    return values


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _load_resources(cfg: RunConfig, use_cooc_cache: bool = True) -> Resources:
    stoplist = load_stoplist(cfg.stoplist_path)
    corpus_dir = Path(cfg.corpus_dir)
    if not corpus_dir.is_dir():
        raise ConfigError(f"corpus directory not found: {corpus_dir}")
    docs = load_corpus(corpus_dir, stoplist)
    lex = SynonymLexicon.load(cfg.synonyms_path) if cfg.synonyms_path else SynonymLexicon.empty()
    table = None
    cache = Path(cfg.output_dir) / "cooc.tsv"
    if use_cooc_cache and cache.exists():
        table = CooccurrenceTable.load(cache)
        if (table.window, table.min_count, table.min_score) != (
            cfg.cooc_window, cfg.cooc_min_count, cfg.cooc_min_score
        ):
            table = None
    return prepare_resources(
        docs, stoplist, lex, cfg.cooc_window, cfg.cooc_min_count, cfg.cooc_min_score, table
    )


def _interest_ids(cfg: RunConfig) -> list[str]:
    path = Path(cfg.interest_file)
    if not path.exists():
        raise ConfigError(f"interest file not found: {path}")
    return [line.strip() for line in path.read_text("utf-8").splitlines() if line.strip()]


def _out(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# Subcommands


def cmd_synth(args: argparse.Namespace) -> int:
    corpus = synth.generate(args.profile, args.n_docs, args.seed or 0)
    corpus.write(args.output_dir or "out")
    print(f"wrote {len(corpus.documents)} documents to {args.output_dir}/corpus")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    if not Path(cfg.corpus_dir).is_dir():
        raise ConfigError(f"corpus directory not found: {cfg.corpus_dir}")
    stoplist = load_stoplist(cfg.stoplist_path)
    docs = load_corpus(cfg.corpus_dir, stoplist)
    out = _out(cfg)
    lines = ["doc_id\tn_sections\tn_sentences\thas_abstract"]
    for doc in docs:
        lines.append(
            f"{doc.id}\t{len(doc.sections)}\t{len(doc.sentences())}"
            f"\t{1 if doc.abstract else 0}"
        )
    (out / "manifest.tsv").write_text("\n".join(lines) + "\n", "utf-8")
    print(f"ingested {len(docs)} documents -> {out / 'manifest.tsv'}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    res = _load_resources(cfg, use_cooc_cache=False)
    out = _out(cfg)
    res.table.save(out / "cooc.tsv")
    stats_obj = {
        "n_docs": res.stats.n_docs,
        "corpus_token_total": res.stats.corpus_token_total,
        "df": res.stats.df,
        "doc_token_totals": res.stats.doc_token_totals,
        "term_corpus_counts": res.stats.term_corpus_counts,
    }
    (out / "stats.json").write_text(json.dumps(stats_obj, indent=2, sort_keys=True) + "\n", "utf-8")
    print(
        f"{res.stats.n_docs} docs, {len(res.stats.df)} terms, "
        f"{len(res.table.entries)} co-occurrence entries -> {out}"
    )
    return 0


def cmd_topic(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    if not cfg.interest_file:
        raise ConfigError("topic requires --interest-file")
    res = _load_resources(cfg)
    topic = build_user_topic(res, _interest_ids(cfg), cfg.topic_top_k, cfg.topic_sigma)
    out = _out(cfg)
    topic.save(out / "topic.tsv")
    keyword_dir = out / "keywords"
    keyword_dir.mkdir(exist_ok=True)
    for doc_id, kmap in build_keyword_maps(res, topic, cfg.decay, cfg.iterations).items():
        kmap.save(keyword_dir / f"{doc_id}.tsv")
    print(f"{len(topic.words)} topic words -> {out / 'topic.tsv'}")
    return 0


def cmd_label(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    res = _load_resources(cfg)
    interest = _interest_ids(cfg) if cfg.mode == "user" else None
    vectors_by_doc = evaluation.collect_labeled_vectors(
        res, cfg.mode, cfg.compression, interest, cfg.user_params()
    )
    all_vectors = [v for _, vecs in sorted(vectors_by_doc.items()) for v in vecs]
    out = _out(cfg)
    dump_vectors_tsv(all_vectors, out / "vectors.tsv")
    balanced = deduplicate_and_balance(all_vectors, cfg.neg_ratio, cfg.seed)
    meta = {
        "n_raw": balanced.n_raw,
        "n_unique": balanced.n_unique,
        "n_positive": balanced.n_positive,
        "n_negative_sampled": balanced.n_negative_sampled,
        "n_label_conflicts": balanced.n_label_conflicts,
        "seed": balanced.rng_seed,
        "compression": cfg.compression,
        "mode": cfg.mode,
    }
    (out / "labelmeta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", "utf-8")
    print(
        f"{balanced.n_raw} vectors, {balanced.n_unique} unique, "
        f"{balanced.n_positive} positive -> {out / 'vectors.tsv'}"
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    vectors_path = Path(cfg.output_dir) / "vectors.tsv"
    if not vectors_path.exists():
        raise ConfigError(
            f"labeled vectors not found at {vectors_path}; run 'sumrules label' first"
        )
    vectors = load_vectors_tsv(vectors_path)
    labeled_set = deduplicate_and_balance(vectors, cfg.neg_ratio, cfg.seed)
    model = evaluation.train_learner(cfg.learner, labeled_set)
    out = _out(cfg)
    save_model(model, out / "model.json")
    if isinstance(model, RuleSet):
        (out / "rules.txt").write_text(format_rules(model) + "\n", "utf-8")
    print(f"trained {cfg.learner} model -> {out / 'model.json'}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    res = _load_resources(cfg)
    interest = _interest_ids(cfg) if cfg.mode == "user" else None
    report = evaluation.cross_validate(
        res,
        cfg.learner,
        cfg.compression,
        cfg.seed,
        cfg.mode,
        interest,
        cfg.neg_ratio,
        user_params=cfg.user_params(),
    )
    out = _out(cfg)
    report.save(out / "report.json")
    report.save_tsv(out / "report.tsv")
    plots.plot_report(report, out / "report.png")
    print(
        f"mean F={report.mean['f_score']:.3f} accuracy={report.mean['accuracy']:.3f} "
        f"over {len(report.per_run)} runs -> {out / 'report.json'}"
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    compressions = [float(c) for c in args.compressions.split(",")]
    res = _load_resources(cfg)
    interest = _interest_ids(cfg) if cfg.mode == "user" else None
    reports, overlaps = evaluation.compression_sweep(
        res,
        cfg.learner,
        compressions,
        cfg.seed,
        cfg.mode,
        interest,
        cfg.neg_ratio,
        user_params=cfg.user_params(),
    )
    out = _out(cfg)
    lines = ["compression\tmean_f\tstd_f\tmean_accuracy\toverlap_with_next"]
    for i, (c, report) in enumerate(zip(compressions, reports)):
        report.save(out / f"report_c{int(round(c * 100)):02d}.json")
        overlap = overlaps[i] if i < len(overlaps) else None
        lines.append(
            f"{c!r}\t{report.mean['f_score']!r}\t{report.std['f_score']!r}"
            f"\t{report.mean['accuracy']!r}\t{'' if overlap is None else repr(overlap)}"
        )
    (out / "sweep.tsv").write_text("\n".join(lines) + "\n", "utf-8")
    plots.plot_sweep(compressions, reports, overlaps, out / "sweep.png")
    fs = ", ".join(f"{c:g}:{r.mean['f_score']:.3f}" for c, r in zip(compressions, reports))
    print(f"F by compression: {fs} -> {out / 'sweep.tsv'}")
    return 0


def cmd_summarize(args: argparse.Namespace) -> int:
    cfg = build_run_config(args)
    model_path = Path(args.model or Path(cfg.output_dir) / "model.json")
    if not model_path.exists():
        raise ConfigError(f"model not found at {model_path}; run 'sumrules train' first")
    model = load_model(model_path)
    res = _load_resources(cfg)
    doc_ids = [args.doc_id] if args.doc_id else sorted(res.docs_by_id)
    keyword_maps: dict[str, KeywordMap] = {}
    referenced = (
        model.weights.keys() if hasattr(model, "weights") else model.referenced_features()
    )
    if any(f in ("keyword_count", "keyword_ratio") for f in referenced):
        if not cfg.interest_file:
            raise ConfigError("this model needs keyword features; pass --interest-file")
        topic = build_user_topic(res, _interest_ids(cfg), cfg.topic_top_k, cfg.topic_sigma)
        keyword_maps = build_keyword_maps(res, topic, cfg.decay, cfg.iterations)
    out = _out(cfg)
    summary_dir = out / "summaries"
    summary_dir.mkdir(exist_ok=True)
    for doc_id in doc_ids:
        if doc_id not in res.docs_by_id:
            raise DataError(f"document {doc_id!r} not in corpus")
        doc = res.docs_by_id[doc_id]
        summary = summarize(
            doc, model, res, cfg.compression, keyword_maps.get(doc_id), model_path.stem
        )
        ext = "json" if args.json else "txt"
        summary.save(summary_dir / f"{doc_id}.{ext}", as_json=args.json)
    print(f"wrote {len(doc_ids)} summaries -> {summary_dir}")
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file with 'key = value' lines")
    parser.add_argument("--corpus-dir", dest="corpus_dir")
    parser.add_argument("--stoplist", dest="stoplist_path")
    parser.add_argument("--synonyms", dest="synonyms_path")
    parser.add_argument("--compression", type=float)
    parser.add_argument("--learner", choices=evaluation.LEARNERS)
    parser.add_argument("--mode", choices=("generic", "user"))
    parser.add_argument("--interest-file", dest="interest_file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--neg-ratio", dest="neg_ratio", type=float)
    parser.add_argument("--cooc-window", dest="cooc_window", type=int)
    parser.add_argument("--cooc-min-count", dest="cooc_min_count", type=int)
    parser.add_argument("--cooc-min-score", dest="cooc_min_score", type=float)
    parser.add_argument("--decay", type=float)
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--topic-sigma", dest="topic_sigma", type=float)
    parser.add_argument("--topic-top-k", dest="topic_top_k", type=int)
    parser.add_argument("--output-dir", dest="output_dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumrules",
        description="Corpus-trained extractive summarizer with editable salience rules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--profile", choices=synth.PROFILES, default="lead-bias")
    p.add_argument("--n-docs", dest="n_docs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", dest="output_dir", default="out")
    p.set_defaults(func=cmd_synth)

    for name, func, help_text in (
        ("ingest", cmd_ingest, "parse and validate a corpus directory"),
        ("stats", cmd_stats, "build corpus statistics and the co-occurrence cache"),
        ("topic", cmd_topic, "build the user-interest topic and keyword maps"),
        ("label", cmd_label, "extract features and label training vectors"),
        ("train", cmd_train, "train a model from labeled vectors"),
        ("evaluate", cmd_evaluate, "run the 10-fold evaluation protocol"),
        ("sweep", cmd_sweep, "evaluate across several compression rates"),
        ("summarize", cmd_summarize, "emit extracts using a trained model"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--compressions", default="0.05,0.10,0.20,0.30")
        if name == "summarize":
            p.add_argument("--model", help="model JSON path (default: <output-dir>/model.json)")
            p.add_argument("--doc-id", dest="doc_id")
            p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, TrainingError, ClassificationError) as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return 4
    except (DataError, SumrulesError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

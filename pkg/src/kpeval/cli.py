"""Command-line front end.

Exit codes are a stable contract: 0 success, 1 io, 2 data, 3 provider,
4 coverage, 64 usage. Flags win over the optional JSON config file.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .corpus import Corpus, corpus_stats, load_corpus
from .embed import CacheProvider, HashProvider, RemoteProvider
from .errors import (
    DimensionMismatch,
    DuplicateId,
    EmptyCorpus,
    EmptyDocument,
    EmptyInput,
    KpevalError,
    MalformedCache,
    MalformedRecord,
    MissingCorpus,
    MissingDocument,
    MissingEmbedding,
    ProtocolError,
    TransportError,
    UnknownDocument,
    ZeroVector,
)
from .extract import extract_embedrank, extract_termfreq, extract_yake
from .harness import (
    EvalReport,
    cross_matrix,
    evaluate,
    export_finetune,
    load_predictions,
    render_report,
    write_extraction,
)
from .metrics import TopKConfig
from .textproc import (
    LemmaTableNormalizer,
    LowercaseNormalizer,
    RussianStemNormalizer,
    load_stopwords,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3
EXIT_COVERAGE = 4
EXIT_USAGE = 64

_DATA_ERRORS = (
    MalformedRecord,
    DuplicateId,
    EmptyCorpus,
    EmptyDocument,
    EmptyInput,
    UnknownDocument,
    MissingCorpus,
)
_PROVIDER_ERRORS = (
    TransportError,
    ProtocolError,
    MissingEmbedding,
    MalformedCache,
    ZeroVector,
    DimensionMismatch,
)


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--corpus",
        action="append",
        default=None,
        metavar="DOMAIN=PATH",
        help="corpus file for a domain; repeatable",
    )
    p.add_argument("--normalizer", default=None,
                   help="stemmer | lowercase | external:<lemma-table-path>")
    p.add_argument("--stopwords", default=None, help="stopword file override")
    p.add_argument("--topk", default=None, help="comma-separated cutoffs, e.g. 5,10,15")
    p.add_argument("--provider", default=None,
                   help="hash[:dim] | cache:<path> | remote:<url>")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--format", default=None, choices=("csv", "json", "markdown"))
    p.add_argument("--config", default=None, help="JSON config file; flags win")


def build_parser() -> _Parser:
    parser = _Parser(prog="kpeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[], help="print corpus statistics")
    _common_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("extract", help="run a baseline extractor")
    _common_flags(p)
    p.add_argument("--extractor", required=True,
                   choices=("termfreq", "yake", "embedrank"))
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--split", default="test", choices=("train", "test"))
    p.add_argument("--max-len", type=int, default=3, dest="max_len")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--diversity", type=float, default=0.0)
    p.add_argument("--lang", default="ru", choices=("ru", "en"))
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="evaluate one prediction file")
    _common_flags(p)
    p.add_argument("--predictions", required=True)
    p.add_argument("--untruncated", action="store_true",
                   help="also score the full prediction lists")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("matrix", help="evaluate a directory of prediction files")
    _common_flags(p)
    p.add_argument("--predictions-dir", required=True, dest="predictions_dir")
    p.add_argument("--untruncated", action="store_true")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("export", help="write fine-tuning files")
    _common_flags(p)
    p.add_argument("--export-format", required=True, dest="export_format",
                   choices=("causal", "seq2seq"))
    p.set_defaults(func=cmd_export)

    return parser


def _load_config(args) -> dict:
    if not args.config:
        return {}
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise _Fail(EXIT_DATA, f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_DATA, f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise _Fail(EXIT_DATA, "config must be a JSON object")
    return cfg


def _setting(args, cfg: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return cfg.get(key, default)


def _corpus_map(args, cfg: dict) -> dict[str, Path]:
    entries = args.corpus
    if not entries:
        from_cfg = cfg.get("corpus")
        if isinstance(from_cfg, dict):
            entries = [f"{d}={p}" for d, p in from_cfg.items()]
        elif isinstance(from_cfg, list):
            entries = from_cfg
    if not entries:
        raise _Fail(EXIT_USAGE, "at least one --corpus DOMAIN=PATH is required")
    out: dict[str, Path] = {}
    for entry in entries:
        domain, sep, path = str(entry).partition("=")
        if not sep or not domain or not path:
            raise _Fail(EXIT_USAGE, f"bad --corpus value {entry!r}, expected DOMAIN=PATH")
        out[domain] = Path(path)
    return out


def _load_corpora(paths: dict[str, Path]) -> dict[str, Corpus]:
    corpora = {}
    for domain, path in paths.items():
        try:
            corpora[domain] = load_corpus(path, name=domain)
        except OSError as exc:
            raise _Fail(EXIT_DATA, f"cannot read corpus {path}: {exc}") from exc
        except _DATA_ERRORS as exc:
            raise _Fail(EXIT_DATA, f"{path}: {exc}") from exc
    return corpora


def _normalizer(args, cfg: dict):
    spec = _setting(args, cfg, "normalizer", "stemmer")
    if spec == "stemmer":
        return RussianStemNormalizer()
    if spec == "lowercase":
        return LowercaseNormalizer()
    if spec.startswith("external:"):
        path = spec.split(":", 1)[1]
        try:
            return LemmaTableNormalizer(path)
        except OSError as exc:
            raise _Fail(EXIT_DATA, f"cannot read lemma table {path}: {exc}") from exc
    raise _Fail(EXIT_USAGE, f"unknown normalizer {spec!r}")


def _stopwords(args, cfg: dict) -> frozenset[str] | None:
    path = _setting(args, cfg, "stopwords")
    if path is None:
        return None
    try:
        return load_stopwords(path)
    except OSError as exc:
        raise _Fail(EXIT_DATA, f"cannot read stopword file {path}: {exc}") from exc


def _topk(args, cfg: dict, untruncated: bool = False) -> TopKConfig:
    raw = _setting(args, cfg, "topk", "5,10,15")
    try:
        cutoffs = tuple(int(part) for part in str(raw).split(","))
        return TopKConfig(cutoffs, untruncated=untruncated)
    except ValueError as exc:
        raise _Fail(EXIT_USAGE, f"bad --topk value {raw!r}: {exc}") from exc


def _provider(args, cfg: dict, seed: int):
    spec = _setting(args, cfg, "provider")
    if spec is None:
        return None
    if spec == "hash" or spec.startswith("hash:"):
        dim = 64
        if ":" in spec:
            try:
                dim = int(spec.split(":", 1)[1])
            except ValueError:
                raise _Fail(EXIT_USAGE, f"bad hash provider spec {spec!r}") from None
        return HashProvider(dim=dim, seed=seed)
    if spec.startswith("cache:"):
        path = spec.split(":", 1)[1]
        try:
            return CacheProvider(path)
        except OSError as exc:
            raise _Fail(EXIT_PROVIDER, f"cannot read cache {path}: {exc}") from exc
    if spec.startswith("remote:"):
        return RemoteProvider(spec.split(":", 1)[1])
    raise _Fail(EXIT_USAGE, f"unknown provider spec {spec!r}")


def _out_dir(args, cfg: dict) -> Path:
    out = Path(_setting(args, cfg, "out", "."))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot create output dir {out}: {exc}") from exc
    return out


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", name)


def _mean_std_cell(ms) -> str:
    return f"{ms.mean:.2f} ± {ms.std:.2f}"


def cmd_stats(args) -> int:
    cfg = _load_config(args)
    corpora = _load_corpora(_corpus_map(args, cfg))
    n = _normalizer(args, cfg)
    for domain in sorted(corpora):
        stats = corpus_stats(corpora[domain], n)
        print(f"domain: {domain}")
        rows = [
            ("train size", str(stats.train_size)),
            ("test size", str(stats.test_size)),
            ("avg sentences/text", _mean_std_cell(stats.avg_sentences)),
            ("avg tokens/text", _mean_std_cell(stats.avg_tokens)),
            ("avg keyphrases/text", _mean_std_cell(stats.avg_keyphrases)),
            ("absent keyphrases, %", f"{stats.absent_pct:.2f}"),
        ]
        for label, value in rows:
            print(f"  {label:<22} {value}")
    return EXIT_OK


def cmd_extract(args) -> int:
    cfg = _load_config(args)
    corpora = _load_corpora(_corpus_map(args, cfg))
    n = _normalizer(args, cfg)
    stopset = _stopwords(args, cfg)
    seed = int(_setting(args, cfg, "seed", 42))
    jobs = int(_setting(args, cfg, "jobs", os.cpu_count() or 1))
    out = _out_dir(args, cfg)
    provider = _provider(args, cfg, seed)
    if args.extractor == "embedrank" and provider is None:
        raise _Fail(EXIT_USAGE, "embedrank requires --provider")
    if args.k < 1:
        raise _Fail(EXIT_USAGE, "--k must be >= 1")

    def run(doc):
        if args.extractor == "termfreq":
            result = extract_termfreq(
                doc, args.k, n, max_len=args.max_len,
                lang=args.lang, stopwords=stopset,
            )
        elif args.extractor == "yake":
            result = extract_yake(
                doc, args.k, max_len=args.max_len, window=args.window,
                lang=args.lang, stopwords=stopset,
            )
        else:
            result = extract_embedrank(
                doc, args.k, max_len=args.max_len, provider=provider,
                diversity=args.diversity, lang=args.lang,
                normalizer=n, stopwords=stopset,
            )
        return doc.id, [c.surface for c in result.ranking]

    for domain in sorted(corpora):
        docs = corpora[domain].split_documents(args.split)
        if not docs:
            raise _Fail(EXIT_DATA, f"corpus {domain!r} has no {args.split} documents")
        with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
            items = list(pool.map(run, docs))
        path = out / f"{args.extractor}_{_safe_name(domain)}.jsonl"
        try:
            write_extraction(path, args.extractor, items)
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot write {path}: {exc}") from exc
        print(path)
    return EXIT_OK


def _load_prediction_file(path: Path, corpus: Corpus):
    try:
        return load_predictions(path, corpus)
    except OSError as exc:
        raise _Fail(EXIT_DATA, f"cannot read predictions {path}: {exc}") from exc
    except MissingDocument as exc:
        raise _Fail(EXIT_COVERAGE, f"{path}: {exc}") from exc


def _write_report(report: EvalReport, fmt: str, path: Path) -> None:
    try:
        render_report(report, fmt, path)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write report {path}: {exc}") from exc


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    corpora = _load_corpora(_corpus_map(args, cfg))
    if len(corpora) != 1:
        raise _Fail(EXIT_USAGE, "eval expects exactly one --corpus")
    corpus = next(iter(corpora.values()))
    n = _normalizer(args, cfg)
    seed = int(_setting(args, cfg, "seed", 42))
    fmt = _setting(args, cfg, "format", "csv")
    topk = _topk(args, cfg, untruncated=args.untruncated)
    provider = _provider(args, cfg, seed)
    out = _out_dir(args, cfg)

    pred = _load_prediction_file(Path(args.predictions), corpus)
    report = evaluate(pred, corpus, topk, n, provider)
    ext = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
    path = out / (
        f"report_{_safe_name(pred.model_id)}_{_safe_name(pred.train_domain)}"
        f"_{_safe_name(pred.test_domain)}.{ext}"
    )
    _write_report(report, fmt, path)
    gs = report.generated_stats
    print(f"avg generated keyphrases: {_mean_std_cell(gs.avg_count)}")
    print(f"mean abstractness: {gs.abstractness:.4f}")
    print(path)
    return EXIT_OK


def _peek_test_domain(path: Path) -> str | None:
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    return None
                if isinstance(obj, dict) and isinstance(obj.get("test_domain"), str):
                    return obj["test_domain"]
                return None
    return None


def cmd_matrix(args) -> int:
    cfg = _load_config(args)
    corpora = _load_corpora(_corpus_map(args, cfg))
    n = _normalizer(args, cfg)
    seed = int(_setting(args, cfg, "seed", 42))
    fmt = _setting(args, cfg, "format", "csv")
    topk = _topk(args, cfg, untruncated=args.untruncated)
    provider = _provider(args, cfg, seed)
    out = _out_dir(args, cfg)

    pred_dir = Path(args.predictions_dir)
    files = sorted(pred_dir.glob("*.jsonl"))
    if not files:
        raise _Fail(EXIT_USAGE, f"no .jsonl prediction files in {pred_dir}")

    preds = []
    for path in files:
        domain = _peek_test_domain(path)
        if domain is None:
            if len(corpora) != 1:
                raise _Fail(
                    EXIT_DATA,
                    f"{path}: headerless file needs exactly one --corpus",
                )
            corpus = next(iter(corpora.values()))
        else:
            corpus = corpora.get(domain)
            if corpus is None:
                raise _Fail(EXIT_DATA, f"{path}: no corpus for domain {domain!r}")
        preds.append(_load_prediction_file(path, corpus))

    reports = cross_matrix(preds, corpora, topk, n, provider)
    rows = tuple(row for report in reports for row in report.rows)
    combined = EvalReport(rows, reports[0].generated_stats)
    ext = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
    path = out / f"matrix.{ext}"
    _write_report(combined, fmt, path)
    print(path)
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = _load_config(args)
    corpora = _load_corpora(_corpus_map(args, cfg))
    out = _out_dir(args, cfg)
    suffix = "txt" if args.export_format == "causal" else "jsonl"
    for domain in sorted(corpora):
        path = out / f"finetune_{args.export_format}_{_safe_name(domain)}.{suffix}"
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                export_finetune(corpora[domain], args.export_format, path)
            except OSError as exc:
                raise _Fail(EXIT_IO, f"cannot write {path}: {exc}") from exc
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        print(path)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"kpeval: {exc}", file=sys.stderr)
        return exc.code
    except MissingDocument as exc:
        print(f"kpeval: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except _DATA_ERRORS as exc:
        print(f"kpeval: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _PROVIDER_ERRORS as exc:
        print(f"kpeval: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except KpevalError as exc:
        print(f"kpeval: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"kpeval: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

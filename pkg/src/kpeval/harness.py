"""Evaluation orchestration, report rendering, fine-tuning export.

Prediction files carry one JSON header line (model_id, train_domain,
test_domain) followed by one record per document; extractor output
files (id/extractor/keyphrases records, no header) are accepted through
the same loader so baselines and generative models share one
evaluation path.
"""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, MeanStd
from .embed import EmbeddingProvider
from .errors import (
    EmptyInput,
    MalformedRecord,
    MissingCorpus,
    MissingDocument,
    UnknownDocument,
)
from .metrics import (
    MetricScore,
    TopKConfig,
    abstractness,
    aggregate,
    bertscore,
    fullmatch_f1,
    join_keyphrases,
    rouge1,
    truncate_topk,
)
from .textproc import Normalizer

KEYPHRASE_MARKER = "<|keyphrases|>"
END_MARKER = "<|end|>"

_METRIC_ORDER = ("rouge1", "fullmatch_f1", "bertscore")


@dataclass(frozen=True)
class PredictionSet:
    model_id: str
    train_domain: str
    test_domain: str
    predictions: dict[str, tuple[str, ...]]


@dataclass(frozen=True)
class ReportRow:
    model_id: str
    train_domain: str
    test_domain: str
    cutoff: int | None  # None means the untruncated list
    metric: str
    value: float


@dataclass(frozen=True)
class GeneratedStats:
    avg_count: MeanStd
    abstractness: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[ReportRow, ...]
    generated_stats: GeneratedStats


def cutoff_label(cutoff: int | None) -> str:
    return "full" if cutoff is None else str(cutoff)


def _atomic_write(path: str | Path, content: str) -> Path:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _parse_keyphrases(obj: dict, line_no: int) -> tuple[str, ...]:
    keys = obj.get("keyphrases")
    if not isinstance(keys, list) or any(not isinstance(k, str) for k in keys):
        raise MalformedRecord(line_no, "keyphrases must be an array of strings")
    return tuple(keys)


def load_predictions(path: str | Path, corpus: Corpus) -> PredictionSet:
    """Read a prediction (or extractor output) file and check coverage.

    Every test-split document id must be present; ids outside the
    corpus are rejected. Headerless extractor files take their model id
    from the per-line ``extractor`` field and count as in-domain.
    """
    path = Path(path)
    known = corpus.by_id()
    model_id = train_domain = test_domain = None
    preds: dict[str, tuple[str, ...]] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "record is not an object")
            if model_id is None and not preds and "model_id" in obj:
                for field in ("model_id", "train_domain", "test_domain"):
                    if not isinstance(obj.get(field), str) or not obj[field]:
                        raise MalformedRecord(
                            line_no, f"header field {field!r} must be a string"
                        )
                model_id = obj["model_id"]
                train_domain = obj["train_domain"]
                test_domain = obj["test_domain"]
                continue
            doc_id = obj.get("id")
            if not isinstance(doc_id, str) or not doc_id:
                raise MalformedRecord(line_no, "missing document id")
            if model_id is None:
                extractor = obj.get("extractor")
                if not isinstance(extractor, str) or not extractor:
                    raise MalformedRecord(
                        line_no, "file has neither header line nor extractor field"
                    )
                model_id = extractor
            if doc_id in preds:
                raise MalformedRecord(line_no, f"duplicate prediction for id {doc_id!r}")
            if doc_id not in known:
                raise UnknownDocument(doc_id)
            preds[doc_id] = _parse_keyphrases(obj, line_no)
    test_docs = corpus.split_documents("test")
    for doc in test_docs:
        if doc.id not in preds:
            raise MissingDocument(doc.id)
    if train_domain is None or test_domain is None:
        # Extractor files are in-domain by construction.
        domain = test_docs[0].domain if test_docs else corpus.documents[0].domain
        train_domain = train_domain or domain
        test_domain = test_domain or domain
    return PredictionSet(model_id, train_domain, test_domain, preds)


def evaluate(
    pred: PredictionSet,
    corpus: Corpus,
    topk: TopKConfig,
    n: Normalizer,
    provider: EmbeddingProvider | None = None,
) -> EvalReport:
    """Score predictions against the corpus test split.

    References are never truncated; predictions are cut at each
    configured k (plus the full list when untruncated is set).
    Generated-output statistics always use the untruncated lists.
    """
    test_docs = corpus.split_documents("test")
    if not test_docs:
        raise EmptyInput(f"corpus {corpus.name!r} has no test documents")
    cutoffs: list[int | None] = list(topk.cutoffs)
    if topk.untruncated:
        cutoffs.append(None)

    rows: list[ReportRow] = []
    for cutoff in cutoffs:
        per_metric: dict[str, list[MetricScore]] = {
            "rouge1": [],
            "fullmatch_f1": [],
        }
        if provider is not None:
            per_metric["bertscore"] = []
        for doc in test_docs:
            plist = list(pred.predictions[doc.id])
            cut = plist if cutoff is None else truncate_topk(plist, cutoff)
            refs = list(doc.keyphrases)
            per_metric["rouge1"].append(rouge1(cut, refs, n))
            per_metric["fullmatch_f1"].append(fullmatch_f1(cut, refs, n))
            if provider is not None:
                per_metric["bertscore"].append(bertscore(cut, refs, provider))
        for metric in _METRIC_ORDER:
            if metric in per_metric:
                agg = aggregate(per_metric[metric])
                rows.append(
                    ReportRow(
                        pred.model_id,
                        pred.train_domain,
                        pred.test_domain,
                        cutoff,
                        metric,
                        agg.f1,
                    )
                )

    counts = [float(len(pred.predictions[d.id])) for d in test_docs]
    abst = [
        abstractness(list(pred.predictions[d.id]), d.text, n) for d in test_docs
    ]
    stats = GeneratedStats(
        MeanStd(statistics.fmean(counts), statistics.pstdev(counts)),
        statistics.fmean(abst),
    )
    return EvalReport(tuple(rows), stats)


def cross_matrix(
    preds: list[PredictionSet],
    corpora: dict[str, Corpus],
    topk: TopKConfig,
    n: Normalizer,
    provider: EmbeddingProvider | None = None,
) -> list[EvalReport]:
    """One report per prediction set, train-major/test-minor order."""
    ordered = sorted(
        preds, key=lambda p: (p.train_domain, p.test_domain, p.model_id)
    )
    reports = []
    for pred in ordered:
        corpus = corpora.get(pred.test_domain)
        if corpus is None:
            raise MissingCorpus(pred.test_domain)
        reports.append(evaluate(pred, corpus, topk, n, provider))
    return reports


def export_finetune(
    corpus: Corpus, format: str, out_path: str | Path
) -> Path:
    """Write fine-tuning inputs.

    causal: one line per document; train documents carry
    text + marker + comma-joined keyphrases + end marker, test
    documents just text + marker (generation prompts). seq2seq: one
    JSON record per train document with input/target fields.
    """
    lines: list[str] = []
    if format == "causal":
        for doc in corpus.documents:
            if "\n" in doc.text:
                warnings.warn(
                    f"document {doc.id!r}: newline in text breaks the "
                    "line-oriented export",
                    stacklevel=2,
                )
            if doc.split == "train":
                if any(", " in kp for kp in doc.keyphrases):
                    warnings.warn(
                        f"document {doc.id!r}: keyphrase contains ', '; "
                        "the joined list will not round-trip",
                        stacklevel=2,
                    )
                joined = join_keyphrases(list(doc.keyphrases))
                lines.append(f"{doc.text}{KEYPHRASE_MARKER}{joined}{END_MARKER}")
            else:
                lines.append(f"{doc.text}{KEYPHRASE_MARKER}")
    elif format == "seq2seq":
        for doc in corpus.documents:
            if doc.split != "train":
                continue
            lines.append(
                json.dumps(
                    {
                        "input": doc.text,
                        "target": join_keyphrases(list(doc.keyphrases)),
                    },
                    ensure_ascii=False,
                )
            )
    else:
        raise ValueError(f"unknown export format {format!r}")
    return _atomic_write(out_path, "".join(line + "\n" for line in lines))


def parse_causal_line(line: str) -> tuple[str, list[str] | None]:
    """Invert a causal export line.

    Returns (text, keyphrases) for training lines and (text, None) for
    generation prompts. Only exact round-trips when no keyphrase
    contains ', '.
    """
    text, sep, rest = line.partition(KEYPHRASE_MARKER)
    if not sep:
        raise ValueError("line is missing the keyphrase marker")
    if rest.endswith(END_MARKER):
        payload = rest[: -len(END_MARKER)]
        return text, payload.split(", ") if payload else []
    if rest:
        raise ValueError("trailing content after the keyphrase marker")
    return text, None


def render_report(
    report: EvalReport, format: str, out_path: str | Path
) -> Path:
    """Serialize report rows deterministically.

    csv and markdown print values as percentages with 2 decimals; json
    keeps raw [0,1] values.
    """
    if not report.rows:
        raise EmptyInput("report has no rows")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["model_id", "train_domain", "test_domain", "cutoff", "metric", "value"]
        )
        for row in report.rows:
            writer.writerow(
                [
                    row.model_id,
                    row.train_domain,
                    row.test_domain,
                    cutoff_label(row.cutoff),
                    row.metric,
                    f"{row.value * 100:.2f}",
                ]
            )
        content = buf.getvalue()
    elif format == "markdown":
        out = [
            "| model_id | train_domain | test_domain | cutoff | metric | value |",
            "| --- | --- | --- | --- | --- | --- |",
        ]
        for row in report.rows:
            out.append(
                f"| {row.model_id} | {row.train_domain} | {row.test_domain} "
                f"| {cutoff_label(row.cutoff)} | {row.metric} "
                f"| {row.value * 100:.2f} |"
            )
        content = "\n".join(out) + "\n"
    elif format == "json":
        payload = [
            {
                "model_id": row.model_id,
                "train_domain": row.train_domain,
                "test_domain": row.test_domain,
                "cutoff": cutoff_label(row.cutoff),
                "metric": row.metric,
                "value": row.value,
            }
            for row in report.rows
        ]
        content = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    else:
        raise ValueError(f"unknown report format {format!r}")
    return _atomic_write(out_path, content)


def write_predictions(
    path: str | Path,
    model_id: str,
    train_domain: str,
    test_domain: str,
    items: list[tuple[str, list[str]]],
) -> Path:
    """Write a header-style prediction file."""
    lines = [
        json.dumps(
            {
                "model_id": model_id,
                "train_domain": train_domain,
                "test_domain": test_domain,
            },
            ensure_ascii=False,
        )
    ]
    for doc_id, keys in items:
        lines.append(
            json.dumps({"id": doc_id, "keyphrases": list(keys)}, ensure_ascii=False)
        )
    return _atomic_write(path, "".join(line + "\n" for line in lines))


def write_extraction(
    path: str | Path, extractor: str, items: list[tuple[str, list[str]]]
) -> Path:
    """Write extractor output: one headerless record per document."""
    lines = [
        json.dumps(
            {"id": doc_id, "extractor": extractor, "keyphrases": list(keys)},
            ensure_ascii=False,
        )
        for doc_id, keys in items
    ]
    return _atomic_write(path, "".join(line + "\n" for line in lines))

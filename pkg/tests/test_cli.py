"""End-to-end command-line behaviour and the exit-code contract."""

import json

import pytest

from kpeval.cli import (
    EXIT_COVERAGE,
    EXIT_DATA,
    EXIT_OK,
    EXIT_PROVIDER,
    EXIT_USAGE,
    main,
)
from kpeval.corpus import load_corpus
from kpeval.embed import HashProvider, write_cache_file
from kpeval.harness import write_extraction, write_predictions


def _stat_value(out: str, label: str) -> str:
    # stats rows print as two spaces, a 22-char label field, a space
    for line in out.splitlines():
        if line.startswith(f"  {label}"):
            return line[25:]
    raise AssertionError(f"no stats row {label!r} in output:\n{out}")


@pytest.fixture
def stats3(data_dir):
    return str(data_dir / "corpus_stats3.jsonl")


@pytest.fixture
def eval2_path(data_dir):
    return str(data_dir / "corpus_eval2.jsonl")


@pytest.fixture
def fix10(data_dir):
    return str(data_dir / "corpus_fix10.jsonl")


class TestUsageErrors:
    def test_no_arguments(self, capsys):
        assert main([]) == EXIT_USAGE

    def test_unknown_flag(self, capsys):
        assert main(["stats", "--bogus"]) == EXIT_USAGE

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_missing_corpus_flag(self, capsys):
        assert main(["stats"]) == EXIT_USAGE

    def test_bad_corpus_syntax(self, capsys, stats3):
        assert main(["stats", "--corpus", stats3]) == EXIT_USAGE

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0


class TestStats:
    def test_fixture_values(self, capsys, stats3):
        assert main(["stats", "--corpus", f"demo={stats3}"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "domain: demo" in out
        assert _stat_value(out, "train size") == "2"
        assert _stat_value(out, "test size") == "1"
        assert _stat_value(out, "avg keyphrases/text") == "2.67 ± 0.94"
        assert _stat_value(out, "absent keyphrases, %") == "25.00"

    def test_two_domains_sorted(self, capsys, stats3, eval2_path):
        code = main(
            ["stats", "--corpus", f"b={stats3}", "--corpus", f"a={eval2_path}"]
        )
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.index("domain: a") < out.index("domain: b")

    def test_missing_file(self, capsys, tmp_path):
        code = main(["stats", "--corpus", f"x={tmp_path / 'nope.jsonl'}"])
        assert code == EXIT_DATA

    def test_malformed_corpus(self, capsys, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{not json\n", encoding="utf-8")
        assert main(["stats", "--corpus", f"x={bad}"]) == EXIT_DATA

    def test_unknown_normalizer(self, capsys, stats3):
        code = main(
            ["stats", "--corpus", f"demo={stats3}", "--normalizer", "chaos"]
        )
        assert code == EXIT_USAGE


class TestExtract:
    def test_termfreq_writes_one_line_per_doc(self, capsys, tmp_path, fix10):
        out = tmp_path / "run"
        code = main(
            [
                "extract",
                "--extractor",
                "termfreq",
                "--corpus",
                f"fix={fix10}",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        path = out / "termfreq_fix.jsonl"
        assert str(path) in capsys.readouterr().out
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 10
        first = json.loads(lines[0])
        assert first["extractor"] == "termfreq"
        assert first["keyphrases"]

    def test_yake_deterministic_bytes(self, capsys, tmp_path, fix10):
        for sub in ("a", "b"):
            code = main(
                [
                    "extract",
                    "--extractor",
                    "yake",
                    "--corpus",
                    f"fix={fix10}",
                    "--out",
                    str(tmp_path / sub),
                    "--jobs",
                    "4",
                ]
            )
            assert code == EXIT_OK
        a = (tmp_path / "a" / "yake_fix.jsonl").read_bytes()
        b = (tmp_path / "b" / "yake_fix.jsonl").read_bytes()
        assert a == b

    def test_embedrank_needs_provider(self, capsys, tmp_path, fix10):
        code = main(
            [
                "extract",
                "--extractor",
                "embedrank",
                "--corpus",
                f"fix={fix10}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_USAGE

    def test_embedrank_with_hash_provider(self, capsys, tmp_path, fix10):
        code = main(
            [
                "extract",
                "--extractor",
                "embedrank",
                "--corpus",
                f"fix={fix10}",
                "--provider",
                "hash:32",
                "--diversity",
                "0.5",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        lines = (tmp_path / "embedrank_fix.jsonl").read_text("utf-8").splitlines()
        assert len(lines) == 10

    def test_empty_split(self, capsys, tmp_path, eval2_path):
        code = main(
            [
                "extract",
                "--extractor",
                "termfreq",
                "--corpus",
                f"demo2={eval2_path}",
                "--split",
                "train",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_DATA

    def test_k_must_be_positive(self, capsys, tmp_path, fix10):
        code = main(
            [
                "extract",
                "--extractor",
                "termfreq",
                "--corpus",
                f"fix={fix10}",
                "--k",
                "0",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_USAGE


class TestEval:
    def _run(self, data_dir, tmp_path, *extra):
        return main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--out",
                str(tmp_path),
                *extra,
            ]
        )

    def test_fixture_report(self, capsys, data_dir, tmp_path):
        assert self._run(data_dir, tmp_path) == EXIT_OK
        out = capsys.readouterr().out
        assert "avg generated keyphrases: 1.50 ± 0.50" in out
        assert "mean abstractness: 0.2500" in out
        report = tmp_path / "report_toy_demo2_demo2.csv"
        assert str(report) in out
        lines = report.read_text(encoding="utf-8").splitlines()
        # 13/21 and 7/12 as percentages
        assert "toy,demo2,demo2,5,rouge1,61.90" in lines
        assert "toy,demo2,demo2,5,fullmatch_f1,58.33" in lines
        assert len(lines) == 1 + 3 * 2

    def test_identity_predictions_hit_100(self, capsys, tmp_path, eval2_path):
        corpus = load_corpus(eval2_path, name="demo2")
        preds = tmp_path / "self.jsonl"
        write_predictions(
            preds,
            "self",
            "demo2",
            "demo2",
            [(d.id, list(d.keyphrases)) for d in corpus.documents],
        )
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={eval2_path}",
                "--predictions",
                str(preds),
                "--out",
                str(tmp_path),
                "--topk",
                "5",
            ]
        )
        assert code == EXIT_OK
        report = tmp_path / "report_self_demo2_demo2.csv"
        lines = report.read_text(encoding="utf-8").splitlines()
        assert "self,demo2,demo2,5,rouge1,100.00" in lines
        assert "self,demo2,demo2,5,fullmatch_f1,100.00" in lines

    def test_missing_coverage(self, capsys, tmp_path, eval2_path):
        preds = tmp_path / "partial.jsonl"
        write_predictions(
            preds, "m", "demo2", "demo2", [("d1", ["граф знаний"])]
        )
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={eval2_path}",
                "--predictions",
                str(preds),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_COVERAGE

    def test_requires_single_corpus(self, capsys, data_dir, tmp_path, stats3):
        code = self._run(data_dir, tmp_path, "--corpus", f"demo={stats3}")
        assert code == EXIT_USAGE

    def test_bad_topk(self, capsys, data_dir, tmp_path):
        assert self._run(data_dir, tmp_path, "--topk", "abc") == EXIT_USAGE
        assert self._run(data_dir, tmp_path, "--topk", "5,4") == EXIT_USAGE
        assert self._run(data_dir, tmp_path, "--topk", "0") == EXIT_USAGE

    def test_unknown_provider(self, capsys, data_dir, tmp_path):
        code = self._run(data_dir, tmp_path, "--provider", "magic")
        assert code == EXIT_USAGE

    def test_markdown_format(self, capsys, data_dir, tmp_path):
        code = self._run(data_dir, tmp_path, "--format", "markdown")
        assert code == EXIT_OK
        report = tmp_path / "report_toy_demo2_demo2.md"
        assert report.read_text(encoding="utf-8").startswith("| model_id ")

    def test_untruncated_adds_full_rows(self, capsys, data_dir, tmp_path):
        code = self._run(data_dir, tmp_path, "--untruncated", "--format", "json")
        assert code == EXIT_OK
        payload = json.loads(
            (tmp_path / "report_toy_demo2_demo2.json").read_text("utf-8")
        )
        assert {row["cutoff"] for row in payload} == {"5", "10", "15", "full"}


class TestEvalProviders:
    _CACHED = [
        "граф знаний, модель данных",
        "сети",
        "граф знаний, факты",
        "сети, данные",
    ]

    def _cache_file(self, tmp_path):
        path = tmp_path / "vectors.jsonl"
        write_cache_file(
            path, HashProvider(dim=16, seed=42), token_keys=self._CACHED
        )
        return path

    def test_cache_provider_scores(self, capsys, data_dir, tmp_path):
        cache = self._cache_file(tmp_path)
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--provider",
                f"cache:{cache}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        lines = (
            (tmp_path / "report_toy_demo2_demo2.csv")
            .read_text("utf-8")
            .splitlines()
        )
        assert any(",bertscore," in line for line in lines)

    def test_cache_miss_is_provider_error(self, capsys, data_dir, tmp_path):
        cache = self._cache_file(tmp_path)
        # cutoff 1 truncates d1 to a joined string the cache never saw
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--provider",
                f"cache:{cache}",
                "--topk",
                "1",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_PROVIDER

    def test_cache_path_missing(self, capsys, data_dir, tmp_path):
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--provider",
                f"cache:{tmp_path / 'void.jsonl'}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_PROVIDER

    def test_remote_provider(self, capsys, data_dir, tmp_path, stub_server):
        url, state = stub_server
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--provider",
                f"remote:{url}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        assert state.requests > 0
        lines = (
            (tmp_path / "report_toy_demo2_demo2.csv")
            .read_text("utf-8")
            .splitlines()
        )
        assert any(",bertscore," in line for line in lines)

    def test_remote_unreachable(self, capsys, data_dir, tmp_path):
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--provider",
                "remote:http://127.0.0.1:9",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_PROVIDER


class TestMatrix:
    def _setup(self, data_dir, tmp_path):
        preds = tmp_path / "preds"
        preds.mkdir()
        (preds / "toy.jsonl").write_bytes(
            (data_dir / "preds_eval2.jsonl").read_bytes()
        )
        write_predictions(
            preds / "cross.jsonl",
            "toy",
            "demo2",
            "demo",
            [("s3", ["кратчайший путь"])],
        )
        return preds

    def test_two_files(self, capsys, data_dir, tmp_path, stats3, eval2_path):
        preds = self._setup(data_dir, tmp_path)
        code = main(
            [
                "matrix",
                "--predictions-dir",
                str(preds),
                "--corpus",
                f"demo2={eval2_path}",
                "--corpus",
                f"demo={stats3}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        lines = (tmp_path / "matrix.csv").read_text("utf-8").splitlines()
        # 2 prediction sets x 3 cutoffs x 2 metrics
        assert len(lines) == 1 + 12
        # train-major ordering: (demo2, demo) sorts before (demo2, demo2)
        assert lines[1].startswith("toy,demo2,demo,")
        assert lines[7].startswith("toy,demo2,demo2,")

    def test_empty_dir(self, capsys, tmp_path, eval2_path):
        empty = tmp_path / "none"
        empty.mkdir()
        code = main(
            [
                "matrix",
                "--predictions-dir",
                str(empty),
                "--corpus",
                f"demo2={eval2_path}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_USAGE

    def test_headerless_needs_single_corpus(
        self, capsys, tmp_path, stats3, eval2_path
    ):
        preds = tmp_path / "preds"
        preds.mkdir()
        write_extraction(
            preds / "tf.jsonl",
            "termfreq",
            [("d1", ["граф"]), ("d2", ["сети"])],
        )
        code = main(
            [
                "matrix",
                "--predictions-dir",
                str(preds),
                "--corpus",
                f"demo2={eval2_path}",
                "--corpus",
                f"demo={stats3}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_DATA

    def test_headerless_single_corpus_ok(self, capsys, tmp_path, eval2_path):
        preds = tmp_path / "preds"
        preds.mkdir()
        write_extraction(
            preds / "tf.jsonl",
            "termfreq",
            [("d1", ["граф знаний"]), ("d2", ["сети"])],
        )
        code = main(
            [
                "matrix",
                "--predictions-dir",
                str(preds),
                "--corpus",
                f"demo2={eval2_path}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        assert (tmp_path / "matrix.csv").exists()

    def test_unknown_domain(self, capsys, data_dir, tmp_path, eval2_path):
        preds = tmp_path / "preds"
        preds.mkdir()
        write_predictions(
            preds / "odd.jsonl", "m", "x", "nowhere", [("d1", ["а"])]
        )
        code = main(
            [
                "matrix",
                "--predictions-dir",
                str(preds),
                "--corpus",
                f"demo2={eval2_path}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_DATA


class TestExport:
    def test_causal_bytes(self, capsys, data_dir, tmp_path):
        code = main(
            [
                "export",
                "--export-format",
                "causal",
                "--corpus",
                f"exp={data_dir / 'corpus_export.jsonl'}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        content = (tmp_path / "finetune_causal_exp.txt").read_text("utf-8")
        assert content == "T<|keyphrases|>a, b<|end|>\nU<|keyphrases|>\n"

    def test_seq2seq(self, capsys, data_dir, tmp_path):
        code = main(
            [
                "export",
                "--export-format",
                "seq2seq",
                "--corpus",
                f"exp={data_dir / 'corpus_export.jsonl'}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        lines = (
            (tmp_path / "finetune_seq2seq_exp.jsonl")
            .read_text("utf-8")
            .splitlines()
        )
        assert [json.loads(x) for x in lines] == [{"input": "T", "target": "a, b"}]

    def test_comma_keyphrase_warns_but_exports(self, capsys, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text(
            json.dumps(
                {
                    "id": "a",
                    "text": "Текст.",
                    "keyphrases": ["left, right"],
                    "domain": "w",
                    "split": "train",
                },
                ensure_ascii=False,
            )
            + "\n",
            encoding="utf-8",
        )
        code = main(
            [
                "export",
                "--export-format",
                "causal",
                "--corpus",
                f"w={corpus}",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        captured = capsys.readouterr()
        assert "warning:" in captured.err
        assert (tmp_path / "finetune_causal_w.txt").exists()


class TestConfigFile:
    def test_config_supplies_defaults(self, capsys, data_dir, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "corpus": {"demo2": str(data_dir / "corpus_eval2.jsonl")},
                    "topk": "1,2",
                    "out": str(tmp_path),
                    "format": "json",
                }
            ),
            encoding="utf-8",
        )
        code = main(
            [
                "eval",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--config",
                str(cfg),
            ]
        )
        assert code == EXIT_OK
        payload = json.loads(
            (tmp_path / "report_toy_demo2_demo2.json").read_text("utf-8")
        )
        assert {row["cutoff"] for row in payload} == {"1", "2"}

    def test_flags_win_over_config(self, capsys, data_dir, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"topk": "1,2", "format": "json"}), "utf-8")
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--config",
                str(cfg),
                "--topk",
                "7",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        payload = json.loads(
            (tmp_path / "report_toy_demo2_demo2.json").read_text("utf-8")
        )
        assert {row["cutoff"] for row in payload} == {"7"}

    def test_config_not_json(self, capsys, data_dir, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("not json", encoding="utf-8")
        code = main(
            [
                "eval",
                "--corpus",
                f"demo2={data_dir / 'corpus_eval2.jsonl'}",
                "--predictions",
                str(data_dir / "preds_eval2.jsonl"),
                "--config",
                str(cfg),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_DATA

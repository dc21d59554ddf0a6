import json
from pathlib import Path

import pytest

from lexaudit import (
    PROFILES,
    frequency_table,
    load_ava,
    load_corpus,
    load_dictionary,
    run_audit,
)
from lexaudit.cli import main
from lexaudit.report import render_audit
from tests.conftest import MASSIVE_LINES


@pytest.fixture()
def workdir(tmp_path):
    corpus = tmp_path / "massive.jsonl"
    corpus.write_text("\n".join(MASSIVE_LINES) + "\n", encoding="utf-8")
    gendered = tmp_path / "gendered.txt"
    gendered.write_text(
        "#feminine\nlove\nwarm\nkind\nquiet\n#masculine\nking\npower\nstrong\n",
        encoding="utf-8",
    )
    ava = tmp_path / "ava.jsonl"
    ava.write_text(
        '{"term": "love", "gender": "f", "examples": {"massive": "i love scary movies"}}\n'
        '{"term": "warm", "gender": "f", "examples": {"massive": "is it warm outside"}}\n',
        encoding="utf-8",
    )
    return tmp_path


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestChi2Command:
    def test_gof(self, capsys):
        code, out, _ = run(["chi2", "gof", "54", "12"], capsys)
        assert code == 0
        assert out.strip() == "26.73 1 <.001"

    def test_ind_yates(self, capsys):
        code, out, _ = run(["chi2", "ind", "54", "12", "1344", "1128", "--yates"], capsys)
        assert code == 0
        assert out.strip() == "18.48 1 <.001"

    def test_ind_no_yates(self, capsys):
        code, out, _ = run(["chi2", "ind", "54", "12", "1344", "1128", "--no-yates"],
                           capsys)
        assert code == 0
        assert out.startswith("19.58")

    def test_gof_p_value_formatting(self, capsys):
        code, out, _ = run(["chi2", "gof", "71", "50"], capsys)
        assert code == 0
        assert out.strip() == "3.64 1 .056"

    def test_validation_error_exits_1(self, capsys):
        code, _, err = run(["chi2", "gof", "0", "0"], capsys)
        assert code == 1
        assert "lexaudit" in err

    def test_non_numeric_counts_exit_1(self, capsys):
        code, _, err = run(["chi2", "gof", "54", "twelve"], capsys)
        assert code == 1
        assert "numeric" in err


class TestUsageErrors:
    def test_unknown_subcommand_exits_1(self, capsys):
        assert run(["frobnicate"], capsys)[0] == 1

    def test_unknown_flag_exits_1(self, capsys):
        assert run(["chi2", "gof", "1", "2", "--bogus"], capsys)[0] == 1

    def test_no_subcommand_prints_usage(self, capsys):
        code, _, err = run([], capsys)
        assert code == 1
        assert "usage" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, _ = run(
            ["stats", "--corpus", str(tmp_path / "nope.jsonl"), "--format", "massive"],
            capsys,
        )
        assert code == 2

    def test_parse_error_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{broken\n")
        code, _, err = run(
            ["stats", "--corpus", str(bad), "--format", "massive"], capsys
        )
        assert code == 2
        assert "parse error" in err


class TestIngest:
    def test_normalized_jsonl(self, workdir, capsys):
        code, out, err = run(
            ["ingest", "--corpus", str(workdir / "massive.jsonl"),
             "--format", "massive"],
            capsys,
        )
        assert code == 0
        lines = [json.loads(l) for l in out.splitlines()]
        assert lines[0]["id"] == "13371"
        assert lines[0]["partition"] == "train"
        assert "10 utterances" in err


class TestStats:
    def test_matches_library(self, workdir, capsys):
        code, out, _ = run(
            ["stats", "--corpus", str(workdir / "massive.jsonl"),
             "--format", "massive"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        from lexaudit import corpus_stats

        corpus = load_corpus(workdir / "massive.jsonl", "massive")
        direct = corpus_stats(corpus, PROFILES["gendered_language"])
        assert payload["total_tokens"] == direct.total_tokens
        assert payload["unique_processed"] == direct.unique_processed


class TestAuditCommand:
    def test_golden_equals_direct_call(self, workdir, capsys):
        out_file = workdir / "report.json"
        code, _, _ = run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--profile", "gendered_language",
             "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        corpus = load_corpus(workdir / "massive.jsonl", "massive")
        dictionary = load_dictionary(workdir / "gendered.txt", "categorical_list")
        direct = frequency_table(
            run_audit(corpus, dictionary, PROFILES["gendered_language"])
        )
        assert out_file.read_bytes() == render_audit(direct, "json")

    def test_ava_remove_golden(self, workdir, capsys):
        out_file = workdir / "report.json"
        code, _, _ = run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--ava", str(workdir / "ava.jsonl"), "--ava-mode", "remove",
             "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        corpus = load_corpus(workdir / "massive.jsonl", "massive")
        dictionary = load_dictionary(workdir / "gendered.txt", "categorical_list")
        ava = load_ava(workdir / "ava.jsonl")
        direct = frequency_table(
            run_audit(corpus, dictionary, PROFILES["gendered_language"],
                      ava=(ava, "remove"))
        )
        assert out_file.read_bytes() == render_audit(direct, "json")

    def test_dict_format_inferred_for_saved_dictionary(self, workdir, capsys):
        # save a merged dictionary, then audit with it exactly as in the
        # documented invocation: --dict combined.jsonl without --dict-format
        combined = workdir / "combined.jsonl"
        code, _, _ = run(
            ["ava-apply",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--ava", str(workdir / "ava.jsonl"), "--mode", "flag",
             "--out", str(combined)],
            capsys,
        )
        assert code == 0
        out_file = workdir / "report.json"
        code, _, _ = run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(combined),
             "--profile", "gendered_language",
             "--ava", str(workdir / "ava.jsonl"), "--ava-mode", "remove",
             "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["dictionary"] == "combined"

    def test_unknown_extension_requires_explicit_format(self, workdir, capsys):
        odd = workdir / "dict.data"
        odd.write_text("#masculine\nking\n")
        code, _, err = run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(odd), "--out", str(workdir / "r.json")],
            capsys,
        )
        assert code == 1
        assert "--dict-format" in err

    def test_export_matches(self, workdir, capsys):
        matches_file = workdir / "matches.jsonl"
        code, _, _ = run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--export-matches", str(matches_file),
             "--out", str(workdir / "r.json")],
            capsys,
        )
        assert code == 0
        records = [json.loads(l) for l in matches_file.read_text().splitlines()]
        assert all(r["corpus"] == "massive" for r in records)

    def test_end_to_end_determinism_across_runs_and_workers(self, workdir, capsys):
        outputs = []
        for i, workers in enumerate(("1", "4")):
            out_file = workdir / f"report{i}.json"
            code, _, _ = run(
                ["audit",
                 "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
                 "--dict", str(workdir / "gendered.txt"),
                 "--dict-format", "categorical_list",
                 "--workers", workers,
                 "--out", str(out_file)],
                capsys,
            )
            assert code == 0
            outputs.append(out_file.read_bytes())
        assert outputs[0] == outputs[1]


class TestAvaCommands:
    def test_ava_extract(self, workdir, capsys):
        out_file = workdir / "candidates.json"
        code, _, err = run(
            ["ava-extract",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        candidates = json.loads(out_file.read_text())
        terms = [c["term"] for c in candidates]
        assert "love" in terms and "warm" in terms
        assert "extracted" in err

    def test_ava_apply_remove(self, workdir, capsys):
        code, out, err = run(
            ["ava-apply",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--ava", str(workdir / "ava.jsonl"), "--mode", "remove"],
            capsys,
        )
        assert code == 0
        patterns = [json.loads(l)["pattern"] for l in out.splitlines()]
        assert "love" not in patterns and "warm" not in patterns
        assert "king" in patterns

    def test_ava_apply_flag(self, workdir, capsys):
        code, out, _ = run(
            ["ava-apply",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--ava", str(workdir / "ava.jsonl"), "--mode", "flag"],
            capsys,
        )
        assert code == 0
        records = [json.loads(l) for l in out.splitlines()]
        flags = {r["pattern"]: r.get("ambiguous", False) for r in records}
        assert flags["love"] and flags["warm"] and not flags["king"]


class TestReportCommand:
    def test_writes_tables_and_figures(self, workdir, capsys):
        report_file = workdir / "report.json"
        run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--out", str(report_file)],
            capsys,
        )
        out_dir = workdir / "out"
        code, _, err = run(
            ["report", "--audit", str(report_file), "--out-dir", str(out_dir)],
            capsys,
        )
        assert code == 0
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == [
            "massive_gendered_gendered_language.csv",
            "massive_gendered_gendered_language.json",
            "massive_gendered_gendered_language.md",
            "massive_gendered_gendered_language.png",
        ]

    def test_no_figures_flag(self, workdir, capsys):
        report_file = workdir / "report.json"
        run(
            ["audit",
             "--corpus", str(workdir / "massive.jsonl"), "--format", "massive",
             "--dict", str(workdir / "gendered.txt"),
             "--dict-format", "categorical_list",
             "--out", str(report_file)],
            capsys,
        )
        out_dir = workdir / "out2"
        code, _, _ = run(
            ["report", "--audit", str(report_file), "--out-dir", str(out_dir),
             "--no-figures", "--formats", "csv"],
            capsys,
        )
        assert code == 0
        assert [p.suffix for p in out_dir.iterdir()] == [".csv"]

    def test_chi2_report(self, workdir, capsys):
        chi2_file = workdir / "chi2.json"
        run(["chi2", "gof", "54", "12", "--json", "--label", "masc vs fem",
             "--out", str(chi2_file)], capsys)
        out_dir = workdir / "out3"
        code, _, _ = run(
            ["report", "--chi2", str(chi2_file), "--out-dir", str(out_dir),
             "--formats", "markdown", "--no-figures"],
            capsys,
        )
        assert code == 0
        content = (out_dir / "chi2.md").read_text()
        assert "| masc vs fem | 26.73 | 1 | <.001 |" in content

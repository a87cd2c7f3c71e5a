import json
from pathlib import Path

import pytest

from bitextverify.cli import EXIT_CONFIG, EXIT_FORMAT, EXIT_IO, fmt_pct, main, parse_grid
from bitextverify.ppm import PpmModel

AR_LINE = "ذهب رجل الى السوق ليشتري الخبز والفاكهة."
EN_LINE = "A man went to the market to buy bread and fruit."


@pytest.fixture
def corpus_tsv(tmp_path):
    path = tmp_path / "pairs.tsv"
    rows = [
        f"1\t{AR_LINE}\t{EN_LINE}\tSatisfactory",
        f"2\t{AR_LINE}\t{EN_LINE} {EN_LINE} {EN_LINE}\tUnsatisfactory",
        f"3\tالطقس اليوم صاف.\tThe weather today is clear.\tSatisfactory",
        f"4\tنص\t{'tiny arabic against long english ' * 6}\tUnsatisfactory",
    ]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def test_fmt_pct_half_up():
    assert fmt_pct(60.145) == "60.15"
    assert fmt_pct(100.0) == "100.00"
    assert fmt_pct(8.184) == "8.18"


def test_parse_grid_range_and_list():
    assert parse_grid("1.25:3.50:0.25") == [1.25 + 0.25 * i for i in range(10)]
    assert parse_grid("1.0,2.0,3.5") == [1.0, 2.0, 3.5]
    with pytest.raises(ValueError):
        parse_grid("3:1:0.5")
    with pytest.raises(ValueError):
        parse_grid("2.0,1.0")


class TestTrain:
    def test_train_writes_model_and_reports(self, tmp_path, capsys):
        src = tmp_path / "corpus.txt"
        src.write_text("line one here\nline two here\n", encoding="utf-8")
        out = tmp_path / "model.ppm"
        assert main(["train", "--input", str(src), "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "2 texts" in printed and "26 symbols" in printed and "order-0 total 26" in printed
        model = PpmModel.load(out)
        assert model.stats(()).total == 26

    def test_train_deterministic_bytes(self, tmp_path):
        src = tmp_path / "corpus.txt"
        src.write_text("repeatable input text\n" * 5, encoding="utf-8")
        out1, out2 = tmp_path / "m1.ppm", tmp_path / "m2.ppm"
        main(["train", "--input", str(src), "--out", str(out1)])
        main(["train", "--input", str(src), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_train_empty_input(self, tmp_path):
        src = tmp_path / "empty.txt"
        src.write_text("", encoding="utf-8")
        out = tmp_path / "m.ppm"
        assert main(["train", "--input", str(src), "--out", str(out)]) == 0
        assert PpmModel.load(out) == PpmModel()

    def test_arabic_numeric_transform(self, tmp_path, capsys):
        src = tmp_path / "ar.txt"
        src.write_text(AR_LINE + "\n", encoding="utf-8")
        out = tmp_path / "m.ppm"
        main(["train", "--input", str(src), "--out", str(out), "--transform", "arabic-numeric"])
        # single-byte recoding: symbol count equals character count
        assert f"{len(AR_LINE)} symbols" in capsys.readouterr().out


class TestScore:
    def test_score_to_file(self, tmp_path, corpus_tsv):
        out = tmp_path / "scores.tsv"
        code = main(["score", "--pairs", str(corpus_tsv), "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("id\tlen_a\tlen_e")
        assert len(lines) == 5
        assert lines[1].split("\t")[0] == "1"

    def test_identical_pair_satisfactory(self, tmp_path):
        # identical pipeline on both sides: same model, identity transform
        src = tmp_path / "prime.txt"
        src.write_text("some shared priming text\n", encoding="utf-8")
        model = tmp_path / "m.ppm"
        main(["train", "--input", str(src), "--out", str(model)])
        pairs = tmp_path / "p.tsv"
        pairs.write_text("1\tsame text\tsame text\n", encoding="utf-8")
        out = tmp_path / "s.tsv"
        main(["score", "--pairs", str(pairs), "--out", str(out),
              "--model-a", str(model), "--model-e", str(model), "--transform", "identity"])
        row = out.read_text(encoding="utf-8").splitlines()[1].split("\t")
        assert row[5] == "1.0000" and row[6] == "1.0000" and row[7] == "Satisfactory"

    def test_empty_side_routed_to_invalid(self, tmp_path):
        pairs = tmp_path / "p.tsv"
        pairs.write_text("1\tنص\ttext\n2\t\tenglish only\n", encoding="utf-8")
        out = tmp_path / "s.tsv"
        invalid = tmp_path / "inv.tsv"
        code = main(["score", "--pairs", str(pairs), "--out", str(out), "--invalid-out", str(invalid)])
        assert code == 0
        assert len(out.read_text(encoding="utf-8").splitlines()) == 2  # header + pair 1
        assert invalid.read_text(encoding="utf-8").splitlines() == ["2\tempty arabic side"]

    def test_deterministic_across_runs(self, tmp_path, corpus_tsv):
        outs = []
        for name in ("a.tsv", "b.tsv"):
            out = tmp_path / name
            main(["score", "--pairs", str(corpus_tsv), "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_scatter_export(self, tmp_path, corpus_tsv):
        out = tmp_path / "s.tsv"
        scatter = tmp_path / "scatter.tsv"
        main(["score", "--pairs", str(corpus_tsv), "--out", str(out), "--scatter", str(scatter)])
        lines = scatter.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "len_a\tlen_e\tbits_a\tbits_e\tverdict"
        assert len(lines) == 5

    def test_aligned_input(self, tmp_path):
        ar = tmp_path / "x.ar"
        en = tmp_path / "x.en"
        ar.write_text(AR_LINE + "\n" + AR_LINE + "\n", encoding="utf-8")
        en.write_text(EN_LINE + "\n" + EN_LINE + "\n", encoding="utf-8")
        out = tmp_path / "s.tsv"
        code = main(["score", "--format", "aligned", "--arabic", str(ar), "--english", str(en),
                     "--out", str(out)])
        assert code == 0
        assert len(out.read_text(encoding="utf-8").splitlines()) == 3


class TestEvaluateSweep:
    def test_evaluate_prints_three_accuracies(self, corpus_tsv, capsys):
        assert main(["evaluate", "--pairs", str(corpus_tsv)]) == 0
        out = capsys.readouterr().out
        assert "satisfactory accuracy:" in out
        assert "unsatisfactory accuracy:" in out
        assert "average accuracy:" in out

    def test_evaluate_single_metric_flag(self, corpus_tsv, capsys):
        assert main(["evaluate", "--pairs", str(corpus_tsv), "--metric", "slr"]) == 0
        assert "average accuracy:" in capsys.readouterr().out

    def test_sweep_layout(self, corpus_tsv, capsys):
        assert main(["sweep", "--pairs", str(corpus_tsv)]) == 0
        lines = capsys.readouterr().out.splitlines()
        header = lines[0].split("\t")
        assert header[0] == "CR\\SLR" and len(header) == 11
        assert header[1] == "1.25" and header[-1] == "3.5"
        assert len(lines) == 11
        for row in lines[1:]:
            assert len(row.split("\t")) == 11


class TestFilter:
    def test_outputs_and_report(self, tmp_path, corpus_tsv):
        out_dir = tmp_path / "out"
        code = main(["filter", "--pairs", str(corpus_tsv), "--out-dir", str(out_dir)])
        assert code == 0
        for name in ("accepted.tsv", "rejected.tsv", "invalid.tsv", "report.json"):
            assert (out_dir / name).exists()
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        counts = report["counts"]
        assert counts["total"] == 4
        n_accepted = len((out_dir / "accepted.tsv").read_text(encoding="utf-8").splitlines())
        assert counts["accepted"] == n_accepted
        assert report["transform"]["arabic"] == "arabic-numeric"
        assert set(report["models"]) == {"arabic", "english"}

    def test_jobs_byte_identical(self, tmp_path, corpus_tsv):
        outputs = []
        for jobs, name in (("1", "one"), ("2", "two")):
            out_dir = tmp_path / name
            main(["filter", "--pairs", str(corpus_tsv), "--out-dir", str(out_dir), "--jobs", jobs])
            outputs.append(
                {p.name: p.read_bytes() for p in sorted(Path(out_dir).iterdir())}
            )
        assert outputs[0] == outputs[1]


class TestStats:
    def test_self_paired_zero_percent(self, tmp_path, capsys):
        src = tmp_path / "prime.txt"
        src.write_text("shared priming text\n", encoding="utf-8")
        model = tmp_path / "m.ppm"
        main(["train", "--input", str(src), "--out", str(model)])
        pairs = tmp_path / "p.tsv"
        pairs.write_text("1\tsame\tsame\n2\talso same\talso same\n", encoding="utf-8")
        assert main(["stats", "--pairs", str(pairs), "--model-a", str(model),
                     "--model-e", str(model), "--transform", "identity"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[-1].split("\t") == ["overall", "2", "0.00", "0.00"]

    def test_category_rows(self, tmp_path, capsys):
        pairs = tmp_path / "p.tsv"
        pairs.write_text(
            "1\tنص\ttext\tSatisfactory\tnews\n2\tنص اخر\tmore text\tSatisfactory\tsport\n",
            encoding="utf-8",
        )
        main(["stats", "--pairs", str(pairs)])
        out = capsys.readouterr().out
        assert "news" in out and "sport" in out and "overall" in out


class TestExitCodes:
    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["score", "--pairs", str(tmp_path / "nope.tsv")]) == EXIT_IO

    def test_malformed_corpus_is_format_error(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("just one column\n", encoding="utf-8")
        assert main(["score", "--pairs", str(path)]) == EXIT_FORMAT

    def test_bad_config_is_config_error(self, tmp_path, corpus_tsv):
        assert main(["score", "--pairs", str(corpus_tsv), "--order", "-2"]) == EXIT_CONFIG
        assert main(["sweep", "--pairs", str(corpus_tsv), "--grid", "3:1:1"]) == EXIT_CONFIG

    def test_unknown_flag_value_is_usage_error(self, corpus_tsv):
        assert main(["score", "--pairs", str(corpus_tsv), "--transform", "rot13"]) == 2

    def test_missing_required_input_is_config_error(self):
        assert main(["score"]) == EXIT_CONFIG

    def test_invalid_utf8_is_format_error(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_bytes(b"1\t\xff\xfe\tx\n")
        assert main(["score", "--pairs", str(path)]) == EXIT_FORMAT

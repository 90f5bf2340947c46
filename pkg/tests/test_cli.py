import csv
import io
import sys

import numpy as np
import pytest

from botminer import cli
from botminer.features import FEATURE_NAMES

HASH = "%040x"


def line(author, i, ts=0, tz="+0000", files="f.py", projects="P1", msg="m"):
    return f"{author};{HASH % i};{ts};{tz};{files};{projects};{msg}"


@pytest.fixture
def record_file(tmp_path):
    rows = []
    i = 0
    for author, n_commits, msg in [
        ("tidy-bot <t@ci.org>", 6, "update deps"),
        ("Jane <jane@x.com>", 3, "varied message number {}"),
        ("Joe <joe@x.com>", 1, "one-off fix"),
    ]:
        for k in range(n_commits):
            rows.append(
                line(author, i, ts=k * 3600, msg=msg.format(k) if "{}" in msg else msg)
            )
            i += 1
    path = tmp_path / "records.txt"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ingest_round_trip(record_file, tmp_path, capsys):
    out = tmp_path / "canon.txt"
    code, _, err = run(["ingest", "--input", record_file, "--out", out], capsys)
    assert code == 0
    assert out.read_text(encoding="utf-8") == record_file.read_text(encoding="utf-8")
    assert "SUMMARY:" in err and "skipped=0" in err


def test_ingest_skip_policy(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text(line("A", 1) + "\n" + "corrupt\n", encoding="utf-8")
    code, _, err = run(
        ["ingest", "--input", path, "--out", tmp_path / "o.txt", "--on-error", "skip"],
        capsys,
    )
    assert code == 0
    assert "skipped=1" in err


def test_ingest_abort_policy(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("corrupt\n", encoding="utf-8")
    code, _, err = run(["ingest", "--input", path, "--out", tmp_path / "o.txt"], capsys)
    assert code == 1
    assert "error:" in err


def test_unknown_flag_exits_2(record_file, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["detect", "--frobnicate", "--input", str(record_file)])
    assert exc.value.code == 2


def test_features_csv(record_file, tmp_path, capsys):
    out = tmp_path / "features.csv"
    code, _, _ = run(["features", "--input", record_file, "--out", out], capsys)
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["author_id"] + list(FEATURE_NAMES)
    assert len(rows) == 4
    assert rows[1][0] == "tidy-bot <t@ci.org>"
    assert rows[1][1] == "6"  # six commits, one file each


def test_detect_bin(record_file, capsys):
    code, out, _ = run(["detect", "--method", "bin", "--input", record_file], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "tidy-bot <t@ci.org>\t1"
    assert lines[1] == "Jane <jane@x.com>\t0"


def test_detect_bim(record_file, capsys):
    code, out, _ = run(["detect", "--method", "bim", "--input", record_file], capsys)
    assert code == 0
    rows = [l.split("\t") for l in out.strip().splitlines()]
    bot_row = rows[0]
    assert float(bot_row[1]) == pytest.approx(1 - 1 / 6)
    assert bot_row[2] == "1" and bot_row[3] == "6"
    single = rows[2]
    assert float(single[1]) == 0.0


def full_pipeline_files(tmp_path, record_file, capsys):
    """Train both models on synthetic data, return their paths."""
    features_csv = tmp_path / "features.csv"
    labels_csv = tmp_path / "labels.csv"
    model_path = tmp_path / "bica.bin"
    ensemble_path = tmp_path / "ensemble.bin"

    rng = np.random.default_rng(0)
    with open(features_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["author_id"] + list(FEATURE_NAMES))
        labels = []
        for i in range(40):
            is_bot = i % 2 == 0
            mean = [60, 2, 0.5, 6, 2, 2] if is_bot else [8, 8, 3, 1.5, 7, 1]
            row = np.abs(rng.normal(mean, 0.3))
            writer.writerow([f"author{i}"] + [f"{v:.4f}" for v in row])
            labels.append((f"author{i}", "bot" if is_bot else "human"))
    with open(labels_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["author_id", "label"])
        writer.writerows(labels)

    code, _, _ = run(
        [
            "train",
            "--features", features_csv,
            "--labels", labels_csv,
            "--out", model_path,
            "--ntree", 20,
            "--seed", 1,
        ],
        capsys,
    )
    assert code == 0
    code, _, _ = run(
        ["ensemble-train", "--synthetic", "--out", ensemble_path, "--seed", 1],
        capsys,
    )
    assert code == 0
    return model_path, ensemble_path


def test_detect_biman_and_report(record_file, tmp_path, capsys):
    bica, ensemble = full_pipeline_files(tmp_path, record_file, capsys)
    scores_csv = tmp_path / "scores.csv"
    code, _, _ = run(
        [
            "detect",
            "--method", "biman",
            "--input", record_file,
            "--bica-model", bica,
            "--ensemble-model", ensemble,
            "--out", scores_csv,
        ],
        capsys,
    )
    assert code == 0
    with open(scores_csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    assert rows[0]["bin"] == "1"
    assert set(r["verdict"] for r in rows) <= {"bot", "human"}

    code, out, _ = run(["report", "--scores", scores_csv], capsys)
    assert code == 0
    assert "authors: 3" in out


def test_detect_biman_missing_model_is_usage_error(record_file, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["detect", "--method", "biman", "--input", str(record_file)])
    assert exc.value.code == 2


def test_tune_runs(record_file, tmp_path, capsys):
    full_pipeline_files(tmp_path, record_file, capsys)
    code, out, _ = run(
        [
            "tune",
            "--features", tmp_path / "features.csv",
            "--labels", tmp_path / "labels.csv",
            "--ntree-grid", "5,10",
            "--mtry-grid", "1,2",
            "--folds", "4",
            "--seed", "0",
        ],
        capsys,
    )
    assert code == 0
    import json

    best = json.loads(out.strip().splitlines()[-1])
    assert best["ntree"] in (5, 10) and best["mtry"] in (1, 2)


def test_characterize_and_filetypes(tmp_path, capsys):
    rows = []
    i = 0
    for k in range(1200):  # spike bot, all commits at 03:00 UTC
        rows.append(line("spike-bot <s@x>", i, ts=3 * 3600 + k * 86400, files="a.md"))
        i += 1
    rows.append(line("tiny <t@x>", i, files="b.js"))
    path = tmp_path / "records.txt"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    out = tmp_path / "classes.csv"
    svg_dir = tmp_path / "svg"
    code, _, err = run(
        ["characterize", "--input", path, "--out", out, "--svg-dir", svg_dir],
        capsys,
    )
    assert code == 0
    with open(out, newline="") as fh:
        rows_out = list(csv.DictReader(fh))
    assert len(rows_out) == 1
    assert rows_out[0]["class"] == "Spike"
    assert "below_min_commits=1" in err
    assert len(list(svg_dir.iterdir())) == 1

    code, out_text, _ = run(["filetypes", "--input", path], capsys)
    assert code == 0
    assert "Documentation,1" in out_text
    assert "JavaScript,1" in out_text


def test_seed_env_fallback(record_file, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BOTMINER_SEED", "123")
    ensemble_path = tmp_path / "e.bin"
    code, _, _ = run(["ensemble-train", "--synthetic", "--out", ensemble_path], capsys)
    assert code == 0
    first = ensemble_path.read_bytes()
    code, _, _ = run(["ensemble-train", "--synthetic", "--out", ensemble_path], capsys)
    assert ensemble_path.read_bytes() == first


def test_missing_input_file_exits_1(capsys):
    code, _, err = run(["ingest", "--input", "/nonexistent/file.txt"], capsys)
    assert code == 1
    assert "error:" in err

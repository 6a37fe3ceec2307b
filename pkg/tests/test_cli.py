import hashlib
import json
from pathlib import Path

import pytest

from insideness import load_dataset
from insideness.cli import main
from insideness.solvers import SOLVERS


def tree_digest(root: Path) -> str:
    h = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            h.update(path.name.encode())
            h.update(path.read_bytes())
    return h.hexdigest()


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "polar"
    code = main(
        [
            "gen", "--family", "polar24", "--train", "3", "--val", "1",
            "--test", "1", "--seed", "7", "--out", str(out),
        ]
    )
    assert code == 0
    return out


class TestGen:
    def test_writes_expected_files(self, tiny_dataset):
        names = sorted(p.name for p in tiny_dataset.iterdir())
        assert "manifest.json" in names
        assert sum(n.endswith(".pbm") for n in names) == 5
        assert sum(n.endswith(".pgm") for n in names) == 5
        manifest = json.loads((tiny_dataset / "manifest.json").read_text())
        assert manifest["counts"] == {"train": 3, "val": 1, "test": 1}
        assert manifest["dataset"] == "polar24"

    def test_byte_identical_reruns(self, tmp_path):
        args = [
            "gen", "--family", "digs", "--train", "2", "--val", "1",
            "--test", "0", "--seed", "5",
        ]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b")]) == 0
        assert tree_digest(tmp_path / "a") == tree_digest(tmp_path / "b")

    def test_different_seed_differs(self, tmp_path):
        base = ["gen", "--family", "spiral", "--train", "2", "--val", "0", "--test", "0"]
        assert main(base + ["--seed", "1", "--out", str(tmp_path / "a")]) == 0
        assert main(base + ["--seed", "2", "--out", str(tmp_path / "b")]) == 0
        assert tree_digest(tmp_path / "a") != tree_digest(tmp_path / "b")

    def test_seed_is_required(self, capsys, tmp_path):
        with pytest.raises(SystemExit):
            main(["gen", "--family", "digs", "--train", "1", "--out", str(tmp_path)])

    def test_bad_arguments_exit_cleanly(self, tmp_path, capsys):
        out = str(tmp_path / "x")
        args = ["gen", "--family", "polar24", "--seed", "1", "--out", out]
        assert main(args + ["--train", "-1"]) == 1
        assert main(args + ["--train", "1", "--size", "10"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_random_walk_family_with_size(self, tmp_path):
        out = tmp_path / "walk"
        code = main(
            [
                "gen", "--family", "random-walk", "--train", "2", "--val", "0",
                "--test", "0", "--size", "12", "--seed", "3", "--out", str(out),
            ]
        )
        assert code == 0
        loaded = load_dataset(out)
        assert loaded.images[0].shape == (12, 12)


class TestVerify:
    @pytest.mark.parametrize("solver", sorted(SOLVERS))
    def test_every_solver_exact_on_generated_data(self, tiny_dataset, solver, capsys):
        code = main(
            [
                "verify", "--dataset", str(tiny_dataset), "--solver", solver,
                "--no-figure", "--out", str(tiny_dataset / f"report-{solver}"),
            ]
        )
        captured = capsys.readouterr()
        assert code == 0, captured.out
        assert "per_image_accuracy\t1.000000" in captured.out

    def test_report_files_and_figure(self, tiny_dataset, tmp_path):
        out = tmp_path / "report"
        code = main(
            ["verify", "--dataset", str(tiny_dataset), "--solver", "rnn",
             "--out", str(out)]
        )
        assert code == 0
        assert (out / "report.txt").is_file()
        assert (out / "report.json").is_file()
        figure = out / "report.png"
        assert figure.is_file() and figure.stat().st_size > 1000
        doc = json.loads((out / "report.json").read_text())
        assert doc["per_image_accuracy"] == 1.0
        assert doc["steps"]["max"] <= 32 * 32

    def test_failure_gives_nonzero_exit(self, tiny_dataset, tmp_path, capsys):
        # corrupt one stored mask so the solver disagrees with it
        import numpy as np
        from insideness import InsidenessMask, read_pgm, write_pgm

        broken = tmp_path / "broken"
        broken.mkdir()
        for path in tiny_dataset.iterdir():
            if path.suffix in (".pbm", ".pgm") or path.name == "manifest.json":
                (broken / path.name).write_bytes(path.read_bytes())
        mask = read_pgm(broken / "train_0000.pgm")
        labels = mask.labels.copy()
        background = np.argwhere(labels != 2)
        r, c = background[0]
        labels[r, c] = 1 - labels[r, c]
        write_pgm(InsidenessMask(labels), broken / "train_0000.pgm")
        code = main(
            ["verify", "--dataset", str(broken), "--solver", "flood", "--no-figure"]
        )
        assert code == 1
        assert "0\ttrain_0000.pbm" in capsys.readouterr().out

    def test_reports_are_deterministic(self, tiny_dataset, tmp_path):
        outs = []
        for name in ("r1", "r2"):
            out = tmp_path / name
            assert main(
                ["verify", "--dataset", str(tiny_dataset), "--solver", "ray-oracle",
                 "--out", str(out), "--no-figure"]
            ) == 0
            outs.append(out)
        for fname in ("report.txt", "report.json"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()

    def test_include_curve_still_exact(self, tiny_dataset, tmp_path):
        assert main(
            ["verify", "--dataset", str(tiny_dataset), "--solver", "rnn",
             "--include-curve", "--no-figure", "--out", str(tmp_path / "ic")]
        ) == 0

    def test_missing_dataset_errors(self, tmp_path):
        assert (
            main(["verify", "--dataset", str(tmp_path / "nope"), "--solver", "flood"])
            == 2
        )

    def test_unknown_solver_rejected(self, tiny_dataset):
        with pytest.raises(SystemExit):
            main(["verify", "--dataset", str(tiny_dataset), "--solver", "magic"])


class TestEnumerateCli:
    def test_lower_bound_line(self, capsys):
        assert main(["enumerate", "--image-size", "7"]) == 0
        assert "13" in capsys.readouterr().out

    def test_grid_line(self, capsys):
        assert main(["enumerate", "--grid", "4"]) == 0
        assert "213" in capsys.readouterr().out

    def test_exact_with_emit(self, capsys, tmp_path):
        out = tmp_path / "enum5"
        assert main(
            ["enumerate", "--image-size", "5", "--exact", "--emit", str(out)]
        ) == 0
        text = capsys.readouterr().out
        assert "exact count of digital Jordan curves in 5x5 images: 1" in text
        loaded = load_dataset(out)
        assert len(loaded.images) == 1

    def test_too_large_errors(self, capsys):
        assert main(["enumerate", "--grid", "9"]) == 1

    def test_even_size_without_exact_errors(self, capsys):
        assert main(["enumerate", "--image-size", "6"]) == 2

    def test_even_size_with_exact(self, capsys):
        assert main(["enumerate", "--image-size", "6", "--exact"]) == 0
        assert "15" in capsys.readouterr().out


class TestTruthTableCli:
    def test_row_count(self, capsys):
        assert main(["truth-table"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 65  # header + 64 rows
        assert lines[1] == "0\t0\t0\t0\t0\t0\t0"
        assert lines[-1] == "1\t1\t1\t1\t1\t1\t0"


class TestParityCli:
    def test_single_value(self, capsys):
        assert main(["parity", "--c", "42", "--n", "7"]) == 0
        assert "parity(7) = 1" in capsys.readouterr().out

    def test_zero(self, capsys):
        assert main(["parity", "--c", "42", "--n", "0"]) == 0
        assert "parity(0) = 0" in capsys.readouterr().out

    def test_sweep_all_pass(self, capsys):
        assert main(["parity", "--c", "42", "--sweep"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 43 and "FAIL" not in out

    def test_out_of_range(self, capsys):
        assert main(["parity", "--c", "4", "--n", "9"]) == 2

    def test_requires_mode(self, capsys):
        assert main(["parity", "--c", "4"]) == 2

"""End-to-end checks of the command-line interface.

Every test drives ``python -m superexp`` in a subprocess with the
calibration cache redirected to a temporary directory, so the assertions
cover argument parsing, exit codes, and byte-level output formatting as
a user would see them.
"""

import json
import math
import os
import subprocess
import sys

import pytest

from superexp.evaluators import default_constants

E = math.e


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    # pre-seed the calibration cache: the in-process constants are already
    # memoized, and subprocesses should not each pay the 192-bit solve
    path = tmp_path_factory.mktemp("superexp-cache")
    payload = default_constants(53).as_decimal_dict()
    (path / "constants-192.json").write_text(json.dumps(payload))
    return path


def run_cli(args, cache):
    env = dict(os.environ, SUPEREXP_CACHE_DIR=str(cache))
    return subprocess.run(
        [sys.executable, "-m", "superexp", *args],
        capture_output=True,
        text=True,
        env=env,
    )


class TestCommonFlags:
    def test_no_subcommand_is_a_usage_error(self, cache_dir):
        proc = run_cli([], cache_dir)
        assert proc.returncode == 1
        assert "usage" in proc.stderr

    def test_unknown_subcommand(self, cache_dir):
        proc = run_cli(["frobnicate"], cache_dir)
        assert proc.returncode == 1

    def test_precision_floor(self, cache_dir):
        proc = run_cli(["eval", "F1", "0", "0", "--precision-bits", "52"], cache_dir)
        assert proc.returncode == 1
        assert "at least 53" in proc.stderr

    def test_unknown_format(self, cache_dir):
        proc = run_cli(["eval", "F1", "0", "0", "--format", "xml"], cache_dir)
        assert proc.returncode == 1


class TestCalibrate:
    def test_text_dump(self, cache_dir):
        proc = run_cli(["calibrate"], cache_dir)
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert "x1 = 2.79824815423139" in lines
        assert "bits = 192" in lines

    def test_json_dump(self, cache_dir):
        proc = run_cli(["calibrate", "--format", "json"], cache_dir)
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["bits"] == 192
        assert payload["x1"].startswith("2.79824815423")
        assert payload["x3"].startswith("-20.287404589940039")

    def test_csv_dump(self, cache_dir):
        proc = run_cli(["calibrate", "--format", "csv"], cache_dir)
        lines = proc.stdout.splitlines()
        assert lines[0] == "name,value"
        x1 = [ln for ln in lines if ln.startswith("x1,")]
        assert len(x1) == 1 and x1[0].startswith("x1,2.79824815423")

    def test_byte_identical_reruns(self, cache_dir):
        first = run_cli(["calibrate", "--format", "json"], cache_dir)
        second = run_cli(["calibrate", "--format", "json"], cache_dir)
        assert first.stdout == second.stdout

    def test_broken_seed_exits_2(self, cache_dir):
        proc = run_cli(["calibrate", "--seed-x1", "100"], cache_dir)
        assert proc.returncode == 2
        assert "calibration failed" in proc.stderr

    def test_corrupt_cache_is_recomputed_and_rewritten(self, tmp_path):
        # slow path: the bad file must not poison the run, and a fresh
        # cache should replace it afterwards
        target = tmp_path / "constants-192.json"
        target.write_text("not json at all")
        proc = run_cli(["eval", "A3", "3", "0"], tmp_path)
        assert proc.returncode == 0
        assert abs(float(proc.stdout.split()[0])) < 1e-12
        assert json.loads(target.read_text())["bits"] == 192

    def test_no_cache_leaves_no_file(self, tmp_path):
        proc = run_cli(["eval", "F1", "0", "0", "--no-cache"], tmp_path)
        assert proc.returncode == 0
        assert list(tmp_path.iterdir()) == []


class TestEval:
    def test_f1_at_zero(self, cache_dir):
        proc = run_cli(["eval", "F1", "0", "0"], cache_dir)
        assert proc.returncode == 0
        re, im = map(float, proc.stdout.split())
        assert abs(re - 1.0) < 1e-13
        assert im == 0.0

    def test_a3_normalization(self, cache_dir):
        proc = run_cli(["eval", "A3", "3", "0"], cache_dir)
        re, im = map(float, proc.stdout.split())
        assert abs(re) < 1e-12 and im == 0.0

    def test_half_iterate_composes_to_one_step(self, cache_dir):
        first = run_cli(
            ["eval", "expc", "1", "0", "--c", "0.5", "--branch", "lower"], cache_dir
        )
        mid = first.stdout.split()[0]
        second = run_cli(
            ["eval", "expc", mid, "0", "--c", "0.5", "--branch", "lower"], cache_dir
        )
        assert abs(float(second.stdout.split()[0]) - math.exp(1 / E)) < 1e-11

    def test_complex_iteration_count_parses(self, cache_dir):
        proc = run_cli(
            ["eval", "expc", "1", "0", "--c", "0.25,0.25", "--branch", "lower"],
            cache_dir,
        )
        assert proc.returncode == 0
        re, im = map(float, proc.stdout.split())
        assert math.isfinite(re) and math.isfinite(im)

    def test_on_cut_without_side_is_strict(self, cache_dir):
        proc = run_cli(["eval", "F1", "-3", "0"], cache_dir)
        assert proc.returncode == 1
        assert "cut_side" in proc.stderr

    def test_cut_sides_are_conjugate(self, cache_dir):
        above = run_cli(["eval", "F1", "-3", "0", "--cut-side", "above"], cache_dir)
        below = run_cli(["eval", "F1", "-3", "0", "--cut-side", "below"], cache_dir)
        assert above.returncode == 0 and below.returncode == 0
        re_a, im_a = map(float, above.stdout.split())
        re_b, im_b = map(float, below.stdout.split())
        assert re_a == re_b and im_a == -im_b and im_a != 0.0

    def test_expc_without_c(self, cache_dir):
        proc = run_cli(["eval", "expc", "1", "0"], cache_dir)
        assert proc.returncode == 1
        assert "--c" in proc.stderr

    def test_csv_value_row(self, cache_dir):
        proc = run_cli(["eval", "A3", "3", "0", "--format", "csv"], cache_dir)
        lines = proc.stdout.splitlines()
        assert lines[0] == "re,im,err"
        re, im, err = lines[1].split(",")
        assert abs(float(re)) < 1e-12 and err == ""

    def test_csv_error_row(self, cache_dir):
        proc = run_cli(["eval", "F1", "-3", "0", "--format", "csv"], cache_dir)
        assert proc.returncode == 1
        assert proc.stdout == "re,im,err\n,,cut\n"

    def test_json_value(self, cache_dir):
        proc = run_cli(["eval", "F1", "0", "0", "--format", "json"], cache_dir)
        payload = json.loads(proc.stdout)
        assert payload["fn"] == "F1"
        assert isinstance(payload["re"], float)
        assert abs(payload["re"] - 1.0) < 1e-13
        assert payload["err"] is None

    def test_json_error(self, cache_dir):
        proc = run_cli(["eval", "F1", "-3", "0", "--format", "json"], cache_dir)
        assert proc.returncode == 1
        payload = json.loads(proc.stdout)
        assert payload["err"] == "cut" and payload["re"] is None

    def test_multiprecision_digit_count(self, cache_dir):
        proc = run_cli(
            ["eval", "F1", "0.5", "0.25", "--precision-bits", "128"], cache_dir
        )
        re, im = proc.stdout.split()
        # 128 bits carries ~39 digits; both parts print well beyond doubles
        assert len(re) > 30 and len(im) > 30

    def test_singular_point_stays_an_error_even_with_a_side(self, cache_dir):
        # z = 1 is the forward image of the log singularity at 0, so no
        # cut side makes A3 finite there
        proc = run_cli(["eval", "A3", "1", "0", "--cut-side", "above"], cache_dir)
        assert proc.returncode == 1


class TestTable:
    def test_levy_block_one(self, cache_dir):
        proc = run_cli(["table", "levy", "--n", "100:109"], cache_dir)
        lines = proc.stdout.splitlines()
        assert len(lines) == 10
        assert lines[0] == "100 -1.4560"
        assert lines[-1].startswith("109 ")

    def test_fatou_printed_digits(self, cache_dir):
        proc = run_cli(["table", "fatou", "--n", "1000:1002"], cache_dir)
        printed = [line.split()[1] for line in proc.stdout.splitlines()]
        assert printed == ["-1.4224939", "-1.4224938", "-1.4224936"]

    def test_csv_format(self, cache_dir):
        proc = run_cli(
            ["table", "levy", "--n", "100:100", "--format", "csv"], cache_dir
        )
        lines = proc.stdout.splitlines()
        assert lines[0] == "method,n,value,printed"
        assert lines[1].startswith("levy,100,-1.45") and lines[1].endswith(",-1.4560")

    def test_json_format(self, cache_dir):
        proc = run_cli(
            ["table", "levy", "--n", "100:100", "--format", "json"], cache_dir
        )
        rows = json.loads(proc.stdout)
        assert rows[0]["printed"] == "-1.4560"
        assert rows[0]["value"].startswith("-1.45")
        assert rows[0]["error"] is None

    def test_empty_range(self, cache_dir):
        proc = run_cli(["table", "levy", "--n", ""], cache_dir)
        assert proc.returncode == 0
        assert proc.stdout == ""

    def test_single_n(self, cache_dir):
        proc = run_cli(["table", "levy", "--n", "100"], cache_dir)
        assert proc.stdout == "100 -1.4560\n"

    def test_newton_accepts_explicit_args(self, cache_dir):
        proc = run_cli(
            ["table", "newton", "--n", "5:5", "--args", "-1,0.5"], cache_dir
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("5 ")

    def test_methods_without_defaults_require_args(self, cache_dir):
        proc = run_cli(["table", "fatou2", "--n", "10:12"], cache_dir)
        assert proc.returncode == 1
        assert "--args" in proc.stderr

    def test_bad_ranges(self, cache_dir):
        assert run_cli(["table", "levy", "--n", "109:100"], cache_dir).returncode == 1
        assert run_cli(["table", "levy", "--n", "abc"], cache_dir).returncode == 1
        proc = run_cli(["table", "levy", "--n", "100:100", "--args", "a,b"], cache_dir)
        assert proc.returncode == 1


class TestMap:
    def test_csv_grid_row_order(self, cache_dir):
        proc = run_cli(
            ["map", "A3", "--x", "-0.5:0.5", "--y", "-0.5:0.5", "--nx", "2",
             "--ny", "2"],
            cache_dir,
        )
        lines = proc.stdout.splitlines()
        assert lines[0] == "x,y,re,im,err"
        assert len(lines) == 5
        # rows sweep y ascending, x fastest
        starts = [tuple(line.split(",")[:2]) for line in lines[1:]]
        assert starts == [
            ("-0.5", "-0.5"), ("0.5", "-0.5"), ("-0.5", "0.5"), ("0.5", "0.5"),
        ]

    def test_real_axis_right_of_e_is_marked_cut(self, cache_dir):
        proc = run_cli(
            ["map", "A1", "--x", "3:4", "--y", "0:1", "--nx", "2", "--ny", "2"],
            cache_dir,
        )
        lines = proc.stdout.splitlines()[1:]
        assert lines[0].endswith(",,cut") and lines[1].endswith(",,cut")
        assert lines[2].endswith(",") and lines[3].endswith(",")

    def test_json_payload(self, cache_dir):
        proc = run_cli(
            ["map", "expc", "--x", "0:1", "--y", "0:0.5", "--nx", "2", "--ny", "2",
             "--c", "0.5", "--format", "json"],
            cache_dir,
        )
        payload = json.loads(proc.stdout)
        assert payload["fn"] == "expc"
        assert payload["nx"] == 2 and payload["ny"] == 2
        assert payload["cut_side"] == "above"
        assert len(payload["samples"]) == 4
        assert all(s["err"] is None for s in payload["samples"])

    def test_out_file_matches_stdout(self, cache_dir, tmp_path):
        args = ["map", "F1", "--x", "0:1", "--y", "0:1", "--nx", "3", "--ny", "3"]
        streamed = run_cli(args, cache_dir)
        target = tmp_path / "grid.csv"
        written = run_cli(args + ["--out", str(target)], cache_dir)
        assert written.returncode == 0 and written.stdout == ""
        assert target.read_text() == streamed.stdout

    def test_unwritable_path_exits_3(self, cache_dir):
        proc = run_cli(
            ["map", "F1", "--x", "0:1", "--y", "0:1", "--nx", "2", "--ny", "2",
             "--out", "/nonexistent-dir/grid.csv"],
            cache_dir,
        )
        assert proc.returncode == 3
        assert "cannot write" in proc.stderr

    def test_expc_requires_c(self, cache_dir):
        proc = run_cli(
            ["map", "expc", "--x", "0:1", "--y", "0:1", "--nx", "2", "--ny", "2"],
            cache_dir,
        )
        assert proc.returncode == 1

    def test_bad_span(self, cache_dir):
        proc = run_cli(
            ["map", "F1", "--x", "1", "--y", "0:1", "--nx", "2", "--ny", "2"],
            cache_dir,
        )
        assert proc.returncode == 1
        assert "lo:hi" in proc.stderr


class TestCheck:
    def test_degenerate_grid_has_four_rows(self, cache_dir):
        proc = run_cli(
            ["check", "d1af", "--x", "0:2", "--y", "0:2", "--nx", "2", "--ny", "2",
             "--format", "csv"],
            cache_dir,
        )
        lines = proc.stdout.splitlines()
        assert lines[0] == "x,y,d"
        data = [ln for ln in lines[1:] if not ln.startswith("#")]
        summary = [ln for ln in lines[1:] if ln.startswith("#")]
        assert len(data) == 4
        assert any(ln.startswith("# fraction_ge_14=") for ln in summary)

    def test_text_summary_fields(self, cache_dir):
        proc = run_cli(
            ["check", "d1af", "--x", "0:2", "--y", "0:2", "--nx", "3", "--ny", "3"],
            cache_dir,
        )
        keys = [line.split()[0] for line in proc.stdout.splitlines()]
        assert keys == ["min", "median", "fraction_ge_14", "unavailable"]

    def test_agreement_region_fraction(self, cache_dir):
        # negative span values ride the flag=value normalization
        proc = run_cli(
            ["check", "d1fa", "--x", "-2:6", "--y", "-6:6", "--nx", "5", "--ny", "5"],
            cache_dir,
        )
        summary = dict(
            line.split(maxsplit=1) for line in proc.stdout.splitlines()
        )
        assert float(summary["fraction_ge_14"]) > 0.5

    def test_json_summary(self, cache_dir):
        proc = run_cli(
            ["check", "dq1", "--x", "0:1", "--y", "0:1", "--nx", "2", "--ny", "2",
             "--format", "json"],
            cache_dir,
        )
        payload = json.loads(proc.stdout)
        assert len(payload["samples"]) == 4
        assert set(payload["summary"]) == {
            "min", "median", "fraction_ge_14", "unavailable",
        }

"""Tests for the batch command line interface.

Covers option resolution precedence, input parsing diagnostics, report
encoding, exit codes, and byte-level determinism of the analysis
commands.
"""

import json

import numpy as np
import pytest

from artifact.cli_interface import (
    InputError,
    JobConfig,
    config_from_args,
    build_parser,
    encode_report,
    load_payload,
    main,
    parse_algebra,
    parse_gform,
    to_jsonable,
)
from artifact.gauge_fields import g_norm


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("INPUT", "OUTPUT", "SEED", "SAMPLES", "TOL", "FORMAT"):
        monkeypatch.delenv(f"ARTIFACT_{name}", raising=False)


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


SD_PAYLOAD = {
    "algebra": "su2",
    "basis": "w",
    "components": {"w1": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]},
}

OMEGA_PAYLOAD = {
    "algebra": "abelian1",
    "basis": "real",
    "components": {"12": 1.0, "34": 1.0, "56": 1.0},
}


# ---------------------------------------------------------------------------
# Configuration resolution
# ---------------------------------------------------------------------------


class TestConfig:
    def test_defaults(self):
        args = build_parser().parse_args(["calibrate"])
        cfg = config_from_args(args)
        assert cfg.seed == 0
        assert cfg.samples == 10000
        assert cfg.tolerance == 1e-9
        assert cfg.format == "json"
        assert cfg.input_path is None
        assert cfg.output_path is None

    def test_flags_override_defaults(self):
        args = build_parser().parse_args(
            ["selftest", "--seed", "5", "--samples", "42", "--tol", "1e-6"]
        )
        cfg = config_from_args(args)
        assert cfg.seed == 5
        assert cfg.samples == 42
        assert cfg.tolerance == 1e-6

    def test_environment_overrides_defaults(self, monkeypatch):
        monkeypatch.setenv("ARTIFACT_SEED", "9")
        monkeypatch.setenv("ARTIFACT_FORMAT", "csv")
        args = build_parser().parse_args(["calibrate"])
        cfg = config_from_args(args)
        assert cfg.seed == 9
        assert cfg.format == "csv"

    def test_flag_beats_environment(self, monkeypatch):
        monkeypatch.setenv("ARTIFACT_SEED", "9")
        args = build_parser().parse_args(["calibrate", "--seed", "3"])
        cfg = config_from_args(args)
        assert cfg.seed == 3

    def test_invalid_environment_value(self, monkeypatch):
        monkeypatch.setenv("ARTIFACT_SEED", "not-a-number")
        args = build_parser().parse_args(["calibrate"])
        with pytest.raises(InputError):
            config_from_args(args)

    def test_jobconfig_validation(self):
        base = dict(
            command="calibrate",
            input_path=None,
            output_path=None,
            seed=0,
            samples=100,
            tolerance=1e-9,
            format="json",
        )
        JobConfig(**base)
        with pytest.raises(InputError):
            JobConfig(**{**base, "command": "unheard-of"})
        with pytest.raises(InputError):
            JobConfig(**{**base, "tolerance": 0.0})
        with pytest.raises(InputError):
            JobConfig(**{**base, "samples": 0})
        with pytest.raises(InputError):
            JobConfig(**{**base, "format": "xml"})


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------


class TestInputParsing:
    def test_missing_input_path(self):
        with pytest.raises(InputError, match="requires --input"):
            load_payload(None)

    def test_missing_file(self):
        with pytest.raises(InputError, match="cannot read"):
            load_payload("/nonexistent/file.json")

    def test_bad_json_reports_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"algebra": "su2",\n  "basis" }')
        with pytest.raises(InputError, match=r"line 2 column"):
            load_payload(str(path))

    def test_non_object_top_level(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(InputError, match="JSON object"):
            load_payload(str(path))

    def test_named_algebras(self):
        assert parse_algebra("su2").dim == 3
        assert parse_algebra("so3").dim == 3
        assert parse_algebra("so5").dim == 10
        assert parse_algebra("su2_trace").inner_mode == "trace"
        assert parse_algebra("abelian4").dim == 4
        with pytest.raises(InputError):
            parse_algebra("sp4")

    def test_custom_algebra(self):
        payload = {
            "name": "custom su(2)",
            "inner": "trace",
            "matrices": [
                [[[0.0, 0.0], [1.0, 0.0]], [[-1.0, 0.0], [0.0, 0.0]]],
                [[[0.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]]],
                [[[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, -1.0]]],
            ],
        }
        algebra = parse_algebra(payload)
        assert algebra.dim == 3
        assert algebra.name == "custom su(2)"

    def test_three_bases_agree(self):
        # the same 2-form through the w family, the real keys, and the
        # complex symbol keys
        via_w = parse_gform(
            {
                "algebra": "abelian1",
                "basis": "w",
                "components": {"w7": [1.0]},
            }
        )
        via_real = parse_gform(
            {
                "algebra": "abelian1",
                "basis": "real",
                "components": {"56": 1.0, "12": -1.0},
            }
        )
        via_complex = parse_gform(
            {
                "algebra": "abelian1",
                "basis": "complex",
                "components": {
                    "1,-1": [[0.0, 0.5]],
                    "3,-3": [[0.0, -0.5]],
                },
            }
        )
        # each parse builds its own algebra object, so compare the raw
        # coefficient matrices instead of subtracting forms
        reference = via_w.to_matrix()
        assert np.max(np.abs(via_real.to_matrix() - reference)) <= 1e-14
        assert np.max(np.abs(via_complex.to_matrix() - reference)) <= 1e-14
        assert g_norm(via_w) == pytest.approx(np.sqrt(2.0))

    def test_unknown_basis_rejected(self):
        with pytest.raises(InputError):
            parse_gform(
                {"algebra": "su2", "basis": "octonion", "components": {}}
            )

    def test_missing_components_rejected(self):
        with pytest.raises(InputError):
            parse_gform({"algebra": "su2", "basis": "w"})

    def test_bad_real_key_rejected(self):
        with pytest.raises(InputError):
            parse_gform(
                {
                    "algebra": "abelian1",
                    "basis": "real",
                    "components": {"21": 1.0},
                }
            )

    def test_wrong_vector_length_rejected(self):
        with pytest.raises(InputError):
            parse_gform(
                {
                    "algebra": "su2",
                    "basis": "w",
                    "components": {"w1": [1.0, 2.0]},
                }
            )


# ---------------------------------------------------------------------------
# Report encoding
# ---------------------------------------------------------------------------


class TestEncoding:
    def test_jsonable_conversions(self):
        out = to_jsonable(
            {
                "z": 1.0 + 2.0j,
                "arr": np.array([1.0, 2.0]),
                "flag": np.bool_(True),
                "n": np.int64(3),
                3: "int key",
            }
        )
        assert out["z"] == [1.0, 2.0]
        assert out["arr"] == [1.0, 2.0]
        assert out["flag"] is True
        assert out["n"] == 3
        assert out["3"] == "int key"

    def test_json_format_sorted_with_newline(self):
        text = encode_report({"b": 1, "a": 2}, "json")
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": 2, "b": 1}

    def test_csv_format(self):
        text = encode_report(
            {"outer": {"x": 1.5, "ok": True}, "items": [10, 20]}, "csv"
        )
        lines = text.strip().split("\n")
        assert lines[0] == "label,value"
        assert "outer.x,1.5" in lines
        assert "outer.ok,true" in lines
        assert "items.0,10" in lines
        assert "items.1,20" in lines


# ---------------------------------------------------------------------------
# End-to-end runs
# ---------------------------------------------------------------------------


class TestEndToEnd:
    def test_calibrate_to_stdout(self, capsys):
        assert main(["calibrate"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["label"] == "sigma=1,kappa=-1.0,s=-1"
        assert report["vertical_index"] == 7

    def test_classify_self_dual(self, tmp_path, capsys):
        path = write_json(tmp_path, "sd.json", SD_PAYLOAD)
        assert main(["classify", "--input", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["label"] == "SD"

    def test_decompose_contact_form(self, tmp_path, capsys):
        path = write_json(tmp_path, "omega.json", OMEGA_PAYLOAD)
        assert main(["decompose", "--input", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["dominant"] == "1"
        assert report["parts"]["1"]["fraction"] == pytest.approx(1.0)
        assert report["total_norm"] == pytest.approx(np.sqrt(3.0))

    def test_spectrum_reports_verdicts(self, tmp_path, capsys):
        path = write_json(tmp_path, "sd.json", SD_PAYLOAD)
        assert main(["spectrum", "--input", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdicts"]["combined_positive"] is True
        assert report["verdicts"]["ricci_positive"] is True

    def test_vanishing_small_curvature(self, tmp_path, capsys):
        path = write_json(tmp_path, "sd.json", SD_PAYLOAD)
        assert main(["vanishing", "--input", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "VANISHES"
        assert report["lambda_min"] == pytest.approx(16.0)

    def test_stability_small_curvature(self, tmp_path, capsys):
        # the w1 coefficient is scaled so the curvature norm stays under
        # the 7-dimensional Ricci threshold 6 / (2 sqrt 2)
        payload = {
            "algebra": "su2",
            "basis": "w",
            "components": {"w1": [[0.25, 0.0], [0.0, 0.0], [0.0, 0.0]]},
        }
        path = write_json(tmp_path, "small.json", payload)
        assert main(["stability", "--input", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "STABLE_SUFFICIENT"

    def test_output_file_and_csv(self, tmp_path):
        out = tmp_path / "report.csv"
        code = main(["calibrate", "--format", "csv", "--output", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "label,value"
        assert any(line.startswith("label,") for line in lines)

    def test_symbols_pass(self, tmp_path, capsys):
        assert main(["symbols", "--samples", "15"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["all_passed"] is True
        assert report["full"]["failures"] == 0
        assert report["basic"]["failures"] == 0
        assert report["full"]["horizontal_probe"]["rank_patterns"] == [
            "1x6x5"
        ]

    def test_stiefel_pass(self, tmp_path, capsys):
        assert main(["stiefel", "--samples", "30"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdicts"]["sdci"] == "PASS"
        assert report["verdicts"]["vanishing"] == "VANISHES"

    def test_selftest_pass(self, tmp_path, capsys):
        assert main(["selftest", "--samples", "120"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "PASS"
        assert report["all_passed"] is True
        assert len(report["suites"]) == 13
        for name, suite in report["suites"].items():
            assert suite["passed"], name


# ---------------------------------------------------------------------------
# Exit codes and error paths
# ---------------------------------------------------------------------------


class TestExitCodes:
    def test_unknown_command_exits_two(self, capsys):
        assert main(["frobnicate"]) == 2
        capsys.readouterr()

    def test_missing_input_exits_two(self, capsys):
        assert main(["classify"]) == 2
        assert "input error" in capsys.readouterr().err

    def test_bad_json_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{nope}")
        assert main(["classify", "--input", str(path)]) == 2
        err = capsys.readouterr().err
        assert "input error" in err
        assert "line 1" in err

    def test_zero_samples_exits_two(self, capsys):
        assert main(["selftest", "--samples", "0"]) == 2
        assert "samples" in capsys.readouterr().err

    def test_bad_tolerance_exits_two(self, capsys):
        assert main(["selftest", "--tol", "-1"]) == 2
        assert "tolerance" in capsys.readouterr().err

    def test_bad_environment_format_exits_two(self, monkeypatch, capsys):
        monkeypatch.setenv("ARTIFACT_FORMAT", "parquet")
        assert main(["calibrate"]) == 2
        assert "format" in capsys.readouterr().err

    def test_parse_error_in_payload_exits_two(self, tmp_path, capsys):
        path = write_json(
            tmp_path,
            "bad-field.json",
            {"algebra": "su2", "basis": "w", "components": {"w9": [0, 0, 0]}},
        )
        assert main(["classify", "--input", str(path)]) == 2
        assert "input error" in capsys.readouterr().err

    def test_failing_analysis_exits_one(self, monkeypatch, capsys):
        import artifact.cli_interface as cli

        monkeypatch.setitem(
            cli._HANDLERS, "calibrate", lambda cfg, model: ({"ok": False}, False)
        )
        assert main(["calibrate"]) == 1
        capsys.readouterr()


# ---------------------------------------------------------------------------
# Determinism
# ---------------------------------------------------------------------------


class TestDeterminism:
    def test_selftest_byte_identical(self, tmp_path):
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        base = ["selftest", "--seed", "7", "--samples", "150"]
        assert main(base + ["--output", str(first)]) == 0
        assert main(base + ["--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_stiefel_byte_identical(self, tmp_path):
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        base = ["stiefel", "--seed", "3", "--samples", "60"]
        assert main(base + ["--output", str(first)]) == 0
        assert main(base + ["--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_different_seeds_differ(self, tmp_path):
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        assert main(
            ["stiefel", "--seed", "0", "--samples", "60", "--output", str(first)]
        ) == 0
        assert main(
            ["stiefel", "--seed", "1", "--samples", "60", "--output", str(second)]
        ) == 0
        assert first.read_bytes() != second.read_bytes()

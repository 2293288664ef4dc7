import json
import math

import pytest

from conezeta.cli import (main, parse_job, ValidationError, EXIT_PASS,
                          EXIT_VERIFY_FAIL, EXIT_VALIDATION, EXIT_DIVERGENT)


def write_job(tmp_path, doc, name="job.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def zeta2_job():
    return {
        "ambientDim": 1,
        "cone": {"generators": [[1]]},
        "forms": [[1], [1]],
        "character": {"modulus": 1, "exponents": [0]},
    }


def alternating_job():
    return {
        "ambientDim": 1,
        "cone": {"generators": [[1]]},
        "forms": [[1], [1]],
        "character": {"modulus": 2, "exponents": [1]},
    }


class TestParseJob:
    def test_round_trip(self):
        job = parse_job(zeta2_job())
        assert job["m"] == 1
        assert job["generators"] == [[1]]
        assert len(job["forms"]) == 2
        assert not job["warnings"]

    def test_rational_strings(self):
        doc = zeta2_job()
        doc["forms"] = [["1/2"], [1]]
        job = parse_job(doc)
        assert float(job["forms"][0]((2,))) == 1.0

    def test_unknown_field_rejected(self):
        doc = zeta2_job()
        doc["conjecture"] = True
        with pytest.raises(ValidationError):
            parse_job(doc)

    def test_unknown_nested_field_rejected(self):
        doc = zeta2_job()
        doc["character"]["parity"] = "odd"
        with pytest.raises(ValidationError):
            parse_job(doc)

    def test_missing_character_warns(self):
        doc = zeta2_job()
        del doc["character"]
        job = parse_job(doc)
        assert job["character"] is None
        assert any("character" in w for w in job["warnings"])

    def test_positivity_rejected(self):
        doc = zeta2_job()
        doc["forms"] = [[-1], [1]]
        with pytest.raises(ValidationError, match="POSITIVITY"):
            parse_job(doc)

    def test_fractional_generator_rejected(self):
        doc = zeta2_job()
        doc["cone"]["generators"] = [["1/2"]]
        with pytest.raises(ValidationError):
            parse_job(doc)

    def test_bad_option_rejected(self):
        doc = zeta2_job()
        doc["options"] = {"precision": "high"}
        with pytest.raises(ValidationError):
            parse_job(doc)


class TestMain:
    def test_reduce_exit_zero(self, tmp_path, capsys):
        path = write_job(tmp_path, zeta2_job())
        assert main(["reduce", path]) == EXIT_PASS
        report = json.loads(capsys.readouterr().out)
        assert report["schemaVersion"] == 1
        assert report["pass"] is None
        assert abs(report["numericSymbolic"]["re"]
                   - math.pi ** 2 / 6) < 1e-8
        assert len(report["symbolicValue"]) == 1
        assert report["symbolicValue"][0]["symbol"]["ks"] == [2]

    def test_verify_passes(self, tmp_path, capsys):
        path = write_job(tmp_path, alternating_job())
        assert main(["verify", path]) == EXIT_PASS
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] is True
        assert report["budgets"]["difference"] <= report["budgets"]["allowed"]

    def test_unknown_field_exit_code(self, tmp_path, capsys):
        doc = zeta2_job()
        doc["extra"] = 1
        path = write_job(tmp_path, doc)
        assert main(["reduce", path]) == EXIT_VALIDATION
        assert json.loads(capsys.readouterr().out)["error"] == "VALIDATION"

    def test_divergent_exit_code(self, tmp_path, capsys):
        doc = zeta2_job()
        doc["forms"] = [[1]]  # harmonic series
        path = write_job(tmp_path, doc)
        assert main(["reduce", path]) == EXIT_DIVERGENT
        assert json.loads(capsys.readouterr().out)["error"] == "DIVERGENT"

    def test_missing_file(self, capsys):
        assert main(["reduce", "/nonexistent/job.json"]) == EXIT_VALIDATION

    def test_max_pieces_flag(self, tmp_path, capsys):
        path = write_job(tmp_path, zeta2_job())
        assert main(["reduce", path, "--max-pieces", "0"]) == EXIT_VALIDATION

    def test_trace_flag_writes_replayable_trace(self, tmp_path, capsys):
        path = write_job(tmp_path, zeta2_job())
        tp = tmp_path / "trace.json"
        assert main(["reduce", path, "--trace", str(tp)]) == EXIT_PASS
        doc = json.loads(tp.read_text())
        assert isinstance(doc["steps"], list)

    def test_deterministic_report_bytes(self, tmp_path, capsys):
        doc = zeta2_job()
        doc["options"] = {"seed": 7}
        path = write_job(tmp_path, doc)
        assert main(["verify", path]) == EXIT_PASS
        first = capsys.readouterr().out
        assert main(["verify", path]) == EXIT_PASS
        second = capsys.readouterr().out
        assert first == second
        assert json.loads(first)["seed"] == 7

    def test_precision_option_sets_tolerance(self, tmp_path, capsys):
        doc = zeta2_job()
        doc["options"] = {"precision": 8}
        path = write_job(tmp_path, doc)
        assert main(["reduce", path]) == EXIT_PASS
        report = json.loads(capsys.readouterr().out)
        assert report["budgets"]["tolerance"] == 1e-8

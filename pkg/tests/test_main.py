import json

import numpy as np
import pytest

from app.main import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SUITE_FAILED,
    GridSpec,
    main,
    parse_complex,
)


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


@pytest.fixture
def free_input(tmp_path):
    return write_json(tmp_path / "free.json", {"beta": 2.0, "harmonics": []})


@pytest.fixture
def hand_input(tmp_path):
    return write_json(tmp_path / "hand.json", {"beta": 2.0, "harmonics": [{"n": 1, "re": 1.0}]})


def test_parse_helpers():
    assert parse_complex("0.5,-2") == 0.5 - 2j
    spec = GridSpec.parse("-1,1,0.5,2,5,4")
    assert (spec.nx, spec.ny) == (5, 4)
    assert spec.region.im_max == 2
    with pytest.raises(ValueError):
        parse_complex("1,2,3")


def test_forward_free_problem(tmp_path, free_input):
    out = tmp_path / "report.json"
    status = main(["forward", "--input", str(free_input), "--output", str(out), "--cutoff", "2"])
    assert status == EXIT_OK
    report = json.loads(out.read_text())
    assert report["eigenvalues"] == []
    assert [s["value"] for s in report["singularities"]] == [0.25, 0.5, 0.5, 1.0]
    assert report["winding"] == 0


def test_forward_dumps_table_and_grid(tmp_path, hand_input):
    out = tmp_path / "report.json"
    table_path = tmp_path / "table.json"
    status = main(
        [
            "forward",
            "--input",
            str(hand_input),
            "--output",
            str(out),
            "--truncation",
            "3",
            "--region",
            "-1,1,0.5,1.5",
            "--dump-vtable",
            str(table_path),
            "--grid",
            "-1,1,0.5,1.5,3,2",
        ]
    )
    assert status == EXIT_OK
    table = json.loads(table_path.read_text())
    assert table["A"] == 3
    entries = {(e["n"], e["alpha"]): complex(e["re"], e["im"]) for e in table["entries"]}
    assert entries[(1, 1)] == pytest.approx(-1)
    assert entries[(1, 3)] == pytest.approx(-1 / 12)
    assert entries[(2, 3)] == pytest.approx(1 / 6)

    grid = np.loadtxt(tmp_path / "report.csv", delimiter=",", skiprows=1)
    assert grid.shape == (6, 4)


def test_malformed_input_exits_with_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    out = tmp_path / "never.json"
    assert main(["forward", "--input", str(bad), "--output", str(out)]) == EXIT_PARSE
    assert not out.exists()


def test_duplicate_harmonic_exits_with_parse_error(tmp_path):
    doc = write_json(
        tmp_path / "dup.json",
        {"beta": 2.0, "harmonics": [{"n": 1, "re": 1.0}, {"n": 1, "re": 2.0}]},
    )
    assert main(["forward", "--input", str(doc)]) == EXIT_PARSE


def test_beta_of_one_exits_with_parse_error(tmp_path):
    doc = write_json(tmp_path / "one.json", {"beta": 1.0, "harmonics": []})
    assert main(["forward", "--input", str(doc)]) == EXIT_PARSE


def test_missing_input_exits_with_parse_error():
    assert main(["inverse"]) == EXIT_PARSE


def test_inverse_of_hand_data(tmp_path):
    doc = write_json(
        tmp_path / "data.json",
        {
            "normalizing_numbers": [
                {"n": 1, "re": -1.0},
                {"n": 2, "re": -0.5},
                {"n": 3, "re": -1 / 12},
            ],
            "c12": {"asymptote": {"re": -1.5, "im": 0.0}},
        },
    )
    out = tmp_path / "result.json"
    assert main(["inverse", "--input", str(doc), "--output", str(out)]) == EXIT_OK
    result = json.loads(out.read_text())
    assert result["beta"] == pytest.approx(2.0)
    harmonics = {h["n"]: complex(h["re"], h["im"]) for h in result["harmonics"]}
    assert harmonics[1] == pytest.approx(1, abs=1e-14)
    assert abs(harmonics[2]) <= 1e-14 and abs(harmonics[3]) <= 1e-14


def test_positive_asymptote_exits_with_numerical_error(tmp_path):
    doc = write_json(
        tmp_path / "data.json",
        {"normalizing_numbers": [{"n": 1, "re": -1.0}], "c12": {"asymptote": {"re": 1.0}}},
    )
    out = tmp_path / "result.json"
    assert main(["inverse", "--input", str(doc), "--output", str(out)]) == EXIT_NUMERICAL
    assert not out.exists()


def test_resolvent_of_free_problem(tmp_path, free_input):
    out = tmp_path / "kernel.json"
    args = ["resolvent", "--input", str(free_input), "--output", str(out)]
    status = main(args + ["--x", "1", "--t", "-1", "--lambda", "0,1"])
    assert status == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["sector"] == "S0"
    assert complex(doc["value"]["re"], doc["value"]["im"]) == pytest.approx(
        np.exp(-3) / 3, abs=1e-14
    )


def test_resolvent_on_real_axis_is_rejected(free_input):
    args = ["resolvent", "--input", str(free_input), "--x", "0", "--t", "0", "--lambda", "1,0"]
    assert main(args) == EXIT_PARSE


def test_validate_fails_at_tiny_truncation(tmp_path, monkeypatch):
    from app.config import settings

    monkeypatch.setattr(settings, "validate_instances", 2)
    out = tmp_path / "validate.txt"
    status = main(["validate", "--seed", "3", "--truncation", "4", "--output", str(out)])
    assert status == EXIT_SUITE_FAILED
    lines = out.read_text().splitlines()
    truncation_row = next(line for line in lines if line.startswith("truncation "))
    assert "FAIL" in truncation_row
    assert lines[-1] == "overall: FAIL"


def test_roundtrip_on_single_harmonic(tmp_path, hand_input):
    out = tmp_path / "roundtrip.txt"
    status = main(["roundtrip", "--input", str(hand_input), "--output", str(out)])
    assert status == EXIT_OK
    lines = out.read_text().splitlines()
    row = next(line for line in lines if line.startswith("round_trip "))
    assert "PASS" in row
    assert "instances=1" in lines[0]
    assert lines[-1] == "overall: PASS"


def test_validate_reports_are_byte_identical(tmp_path):
    first, second = tmp_path / "first.txt", tmp_path / "second.txt"
    assert main(["validate", "--seed", "7", "--output", str(first)]) == EXIT_OK
    assert main(["validate", "--seed", "7", "--output", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    row = next(
        line for line in first.read_text().splitlines() if line.startswith("derivative_identity ")
    )
    assert "mode=eigenvalue" in row

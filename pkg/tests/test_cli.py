"""End-to-end runs of the moebius-dyn command line."""

import csv
import io
import json

import pytest

from moebius_dyn.main import EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, EXIT_POLE, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# === classify ===

def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "-a", "1", "-b", "2", "-c", "3")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["real"]["verdict"] == "converges-to"
    assert payload["numeric_limit"]["converged"] is True
    assert payload["numeric_limit"]["value"] == pytest.approx(0.36602540378, abs=1e-8)


def test_classify_text_with_prime(capsys):
    code, out, _ = run(capsys, "classify", "-a", "1", "-b", "3", "-c", "1", "-p", "3", "--format", "text")
    assert code == EXIT_OK
    assert "indifferent" in out
    assert "Siegel radius" in out


def test_classify_negative_fraction(capsys):
    code, out, _ = run(capsys, "classify", "-a", "1", "-b=-1", "-c=-1/2")
    assert code == EXIT_OK
    assert json.loads(out)["map"]["c"] == "-1/2"


@pytest.mark.parametrize("params", [("1", "2", "3"), ("0", "1", "5"), ("1", "3", "1")])
def test_classify_output_is_byte_identical(capsys, params):
    a, b, c = params
    argv = ["classify", "-a", a, "-b", b, "-c", c, "-p", "5"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]


@pytest.mark.parametrize("argv", [
    ["-a", "1", "-b", "0", "-c", "3"],
    ["-a", "1", "-b", "2", "-c", "2"],
    ["-a", "1.5", "-b", "2", "-c", "3"],
    ["-a", "1", "-b", "2", "-c", "3", "-p", "4"],
    ["-a", "1", "-b", "2", "-c", "3", "--qmax", "1"],
    ["-a", "1", "-b", "2", "-c", "3", "--tol", "0"],
])
def test_classify_invalid_input(capsys, argv):
    code, out, err = run(capsys, "classify", *argv)
    assert code == EXIT_INVALID
    assert out == ""
    assert err


def test_classify_sweep(capsys):
    code, out, _ = run(capsys, "classify", "-a", "1", "-b", "2", "-c", "3", "--sweep", "1", "-p", "3")
    assert code == EXIT_OK
    entries = json.loads(out)
    # 27 grid points minus the four with c = ab
    assert len(entries) == 23
    assert entries[0]["map"]["a"] == "0"
    assert all("padic" in entry for entry in entries)


def test_classify_writes_output_file(capsys, tmp_path):
    target = tmp_path / "classify.json"
    code, out, _ = run(capsys, "classify", "-a", "1", "-b", "1", "-c=-1", "-o", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["real"]["period"] == 2


# === iterate ===

def test_iterate_exact_csv(capsys):
    code, out, _ = run(capsys, "iterate", "-a", "1", "-b", "1", "-c=-1", "-x", "2", "-n", "4")
    assert code == EXIT_OK
    records = list(csv.DictReader(io.StringIO(out)))
    assert [r["value_exact"] for r in records] == ["2", "3", "2", "3", "2"]


def test_iterate_padic_column(capsys):
    code, out, _ = run(capsys, "iterate", "-a", "0", "-b", "1", "-c", "5", "-x", "1", "-n", "3", "-p", "5")
    assert code == EXIT_OK
    records = list(csv.DictReader(io.StringIO(out)))
    assert [r["padic_exponent"] for r in records] == ["1", "2", "3", "4"]


def test_iterate_float_json(capsys):
    code, out, _ = run(capsys, "iterate", "-a", "1", "-b", "2", "-c", "3", "-x", "0.3", "-n", "3", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert len(rows) == 4
    assert rows[0]["value_exact"] == ""
    assert rows[1]["value_decimal"] == pytest.approx(1.3 / 3.6)


def test_iterate_start_at_pole(capsys):
    code, _, err = run(capsys, "iterate", "-a", "1", "-b", "1", "-c=-1", "-x", "1")
    assert code == EXIT_POLE
    assert "pole" in err


def test_iterate_orbit_into_pole_warns(capsys):
    code, out, err = run(capsys, "iterate", "-a", "0", "-b", "1", "-c", "1", "-x=-1/2", "-n", "5")
    assert code == EXIT_OK
    records = list(csv.DictReader(io.StringIO(out)))
    assert records[-1]["pole"] == "1"
    assert "pole" in err


def test_iterate_float_start_rejects_prime(capsys):
    code, _, _ = run(capsys, "iterate", "-a", "1", "-b", "2", "-c", "3", "-x", "0.3", "-p", "5")
    assert code == EXIT_INVALID


# === periods ===

def test_periods_json(capsys):
    code, out, _ = run(capsys, "periods", "-a", "1", "-b=-1", "-c", "1", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["min_period"] == 4


def test_periods_text(capsys):
    code, out, _ = run(capsys, "periods", "-a=-1", "-b", "1", "-c", "0", "--qmax", "5")
    assert code == EXIT_OK
    assert "minimal period 3" in out


# === padic ===

def test_padic_report(capsys):
    code, out, _ = run(capsys, "padic", "-a", "0", "-b", "1", "-c", "5", "-p", "5")
    assert code == EXIT_OK
    padic = json.loads(out)["padic"]
    assert padic["classification"]["which"] == "x2"
    assert padic["characters"]["x2"]["kind"] == "attracting"


def test_padic_needs_prime(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["padic", "-a", "0", "-b", "1", "-c", "5"])
    assert excinfo.value.code == 2


# === density ===

def test_density_refuses_periodic_map(capsys):
    code, out, err = run(capsys, "density", "-a=-1", "-b", "1", "-c", "0")
    assert code == EXIT_MISMATCH
    assert out == ""
    assert "dense" in err


def test_density_json(capsys):
    code, out, _ = run(capsys, "density", "-a", "1", "-b=-1", "-c", "1/2", "-n", "1000", "--format", "json")
    assert code == EXIT_OK
    hist = json.loads(out)["histogram"]
    assert sum(hist["counts"]) + hist["below"] + hist["above"] + hist["skipped"] == 1000
    assert len(hist["counts"]) == 40


def test_density_csv_bins(capsys):
    code, out, _ = run(capsys, "density", "-a", "1", "-b=-1", "-c", "1/2", "-n", "200", "--bins", "5", "--lo=-1", "--hi", "1")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 6


def test_density_rejects_empty_window(capsys):
    code, _, _ = run(capsys, "density", "-a", "1", "-b=-1", "-c", "1/2", "--lo", "2", "--hi", "1")
    assert code == EXIT_INVALID


# === report ===

def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "-a", "1", "-b=-1", "-c", "3", "-p", "2", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["padic"]["siegel"]["holds"] is True
    assert payload["padic"]["classification"]["verdict"] == "indifferent"
    assert payload["bad_points"]["points"][:3] == ["3", "2", "5/3"]
    assert payload["numeric_limit"]["extrapolated"] is True
    assert payload["numeric_limit"]["value"] == pytest.approx(1.0, abs=1e-8)


def test_report_text(capsys):
    code, out, _ = run(capsys, "report", "-a", "1", "-b", "2", "-c", "3")
    assert code == EXIT_OK
    assert "converges-to" in out


# === config ===

def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "--config", str(tmp_path / "nope.json"), "classify", "-a", "1", "-b", "2", "-c", "3")
    assert code == EXIT_INVALID
    assert "config" in err


def test_config_changes_defaults(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"iterations": 2}))
    code, out, _ = run(capsys, "--config", str(config), "iterate", "-a", "1", "-b", "2", "-c", "3", "-x", "0")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 4

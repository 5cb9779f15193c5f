import json
import subprocess
import sys

import pytest

from nilsection.cli import (EXIT_FAIL, EXIT_GUARD, EXIT_INVALID, EXIT_OK, Report, RunConfig, analyse,
                            main, property_checks, run, sweep_data)
from nilsection.orbifold import BranchData

from conftest import HYPERELLIPTIC, TWO_POINTS


def test_single_hyperelliptic_report():
    (rep,) = run(RunConfig("single", HYPERELLIPTIC))
    assert (rep.genus, rep.h1_dimension, rep.section_class_count) == (2, 4, 16)
    assert rep.injective is True and len(rep.liftable_set) == 6 and rep.passed


def test_single_two_points_report():
    rep = analyse(TWO_POINTS)
    assert rep.h1_dimension == 0 and rep.injective is False and rep.passed


def test_json_roundtrip():
    rep = analyse(TWO_POINTS, timings=True)
    line = rep.to_json()
    raw = json.loads(line)
    assert raw["genus"] == "2" and raw["monodromies"] == ["1", "1"]
    assert Report.from_json(line) == rep


def test_exit_codes(capsys):
    assert main(["--p", "2", "--h", "1", "--monodromies", "1,1"]) == EXIT_OK
    assert main(["--p", "3", "--monodromies", "1,1,2"]) == EXIT_INVALID
    assert "sum of monodromies" in capsys.readouterr().err
    assert main(["--mode", "sweep", "--max-p", "2"]) == EXIT_INVALID
    assert main(["--mode", "sweep", "--max-p", "97", "--max-h", "0", "--max-n", "2"]) == EXIT_GUARD


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("single")
    with pytest.raises(ValueError):
        RunConfig("sweep", max_p=3)
    with pytest.raises(ValueError):
        RunConfig("nonsense")


def test_empty_sweep(capsys):
    assert main(["--mode", "sweep", "--max-p", "1", "--max-h", "0", "--max-n", "0"]) == EXIT_OK
    assert list(sweep_data(1, 0, 0)) == []


def test_free_only_sweep():
    reps = run(RunConfig("sweep", max_p=3, max_h=2, max_n=0))
    assert reps and all(r.prop44 for r in reps)
    assert all(r.thm47 is None and r.cor12 is None and r.thm13 is None for r in reps)


def test_sweep_canonical_data():
    data = list(sweep_data(3, 1, 4))
    assert BranchData(3, 0, (1, 1, 2, 2)) in data
    assert all(list(b.monodromies) == sorted(b.monodromies) for b in data)
    assert all(set(b.handle_images) <= {0, 1} and sum(b.handle_images) <= 1 for b in data)


def test_proptest_mode_seeded():
    a = property_checks(5, rounds=4)
    assert a == property_checks(5, rounds=4)
    assert all(v for _, _, v in a)


def test_cli_is_deterministic():
    cmd = [sys.executable, "-m", "nilsection.cli", "--mode", "sweep", "--max-p", "3", "--max-h", "1",
           "--max-n", "4", "--format", "json-lines"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.count(b"\n") > 10

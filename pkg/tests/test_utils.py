import os

import numpy as np
import pytest

from core import CheckResult, IterationRecord
from utils import Timer, is_verbose, set_verbose, vprint
from utils.analysis import (
    format_number,
    multiset_permutation_count,
    positive_part,
    relative_error,
    signed_power,
    unit_sphere_measure,
)
from utils.reader import CACHE_MAGIC, read_assembly_cache, read_csv_rows, read_field_csv
from utils.setup import log_failure, remove_empty_failure_file, setup_paths
from utils.timing import get_time_as_string
from utils.writer import field_to_csv, results_to_csv, write_assembly_cache, write_summary_json


def test_signed_power_and_positive_part():
    t = np.array([-8.0, 0.0, 4.0])
    np.testing.assert_allclose(signed_power(t, 0.5), [-np.sqrt(8.0), 0.0, 2.0])
    np.testing.assert_array_equal(positive_part(t), [0.0, 0.0, 4.0])


def test_format_number():
    assert format_number(None) == ""
    assert format_number(np.int64(3)) == 3
    assert format_number(0.1) == "0.1"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number("x") == "x"


def test_counting_helpers():
    assert multiset_permutation_count([1, 1, 0, 0]) == 6
    assert multiset_permutation_count(range(5)) == 120
    assert unit_sphere_measure(1) == 2.0
    assert unit_sphere_measure(2) == pytest.approx(2 * np.pi)
    with pytest.raises(ValueError):
        unit_sphere_measure(3)
    assert relative_error(1.1, 1.0) == pytest.approx(0.1)
    assert relative_error(1e-3, 0.0) == 1e-3


def test_results_to_csv(tmp_path):
    records = [
        IterationRecord(k=0, g=np.zeros(2), phi=0.5, solver_iterations=3, solver_residual=1e-9, lambda_=2.0),
        IterationRecord(k=1, g=np.zeros(2), phi=0.75, solver_iterations=2, solver_residual=1e-10),
    ]
    path = str(tmp_path / "trace.csv")
    results_to_csv(records, path)
    with open(path, encoding="utf-8") as f:
        assert f.read() == (
            "k,lambda,phi,eigen_iterations,eigen_residual\n"
            "0,2.0,0.5,3,1e-09\n"
            "1,,0.75,2,1e-10\n"
        )


def test_results_to_csv_refuses_mixed_rows(tmp_path):
    rows = [
        CheckResult(check="a", measured=0.0, threshold=1.0, passed=True),
        IterationRecord(k=0, g=np.zeros(1), phi=0.0, solver_iterations=0, solver_residual=0.0),
    ]
    with pytest.raises(AssertionError):
        results_to_csv(rows, str(tmp_path / "x.csv"))
    with pytest.raises(AssertionError):
        results_to_csv([], str(tmp_path / "x.csv"))


def test_field_csv_round_trip(tmp_path):
    centers = np.array([[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]])
    values = np.array([0.1, 0.2, 1 / 3, 0.0])
    path = str(tmp_path / "field.csv")
    field_to_csv(centers, values, path)
    assert list(read_csv_rows(path)[0]) == ["cell", "x", "y", "value"]
    np.testing.assert_array_equal(read_field_csv(path), values)


def test_summary_json_refuses_nan(tmp_path):
    path = str(tmp_path / "summary.json")
    write_summary_json({"b": 1, "a": [0.5]}, path)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    assert text.index('"a"') < text.index('"b"')
    with pytest.raises(ValueError):
        write_summary_json({"x": float("nan")}, path)


def test_assembly_cache_file(tmp_path):
    W = np.array([[0.0, 1.5], [1.5, 0.0]])
    kappa = np.array([0.25, 0.25])
    path = str(tmp_path / "a.kasm")
    write_assembly_cache(path, W, kappa)
    with open(path, "rb") as f:
        assert f.read(4) == CACHE_MAGIC

    W_read, kappa_read = read_assembly_cache(path, 2)
    np.testing.assert_array_equal(W_read, W)
    np.testing.assert_array_equal(kappa_read, kappa)
    assert read_assembly_cache(path, 3) is None
    assert read_assembly_cache(str(tmp_path / "absent.kasm"), 2) is None

    bad = tmp_path / "bad.kasm"
    bad.write_bytes(b"XXXX" + bytes(8))
    assert read_assembly_cache(str(bad), 2) is None


def test_failure_file_lifecycle(tmp_path):
    out = str(tmp_path / "run")
    ff_loc, time_loc = setup_paths(out)
    assert os.path.isfile(ff_loc)
    remove_empty_failure_file(ff_loc)
    assert not os.path.exists(ff_loc)

    ff_loc, _ = setup_paths(out)
    log_failure(ff_loc, "restart 2 failed\n")
    log_failure(ff_loc, "restart 3 failed")
    remove_empty_failure_file(ff_loc)
    with open(ff_loc, encoding="utf-8") as f:
        assert f.read() == "restart 2 failed\nrestart 3 failed\n"


def test_timer_writes_phases(tmp_path):
    path = str(tmp_path / "time.txt")
    timer = Timer(path)
    timer.start()
    timer.log_phase("Kernel assembly")
    timer.log_phase("Command eig-min")
    timer.log_time_since_start("Total time")
    timer.log_breakdown()
    timer.stop()
    assert set(timer.phases) == {"Kernel assembly", "Command eig-min"}
    assert timer.file is None
    with open(path, encoding="utf-8") as f:
        text = f.read()
    assert "Kernel assembly:" in text
    assert "Total time:" in text
    assert text.count("%") == 2


@pytest.mark.parametrize(
    "seconds, expected",
    [(12.5, "12.50 seconds"), (60.0, "1.00 minutes"), (90.0, "1.50 minutes"), (3600.0, "1 hours, 0.00 minutes"), (5430.0, "1 hours, 30.50 minutes")],
)
def test_time_strings(seconds, expected):
    assert get_time_as_string(seconds) == expected


def test_vprint(capsys):
    vprint("hidden")
    set_verbose(True)
    vprint("shown")
    set_verbose(False)
    assert capsys.readouterr().out == "shown\n"


def test_verbosity_flag():
    assert not is_verbose()
    set_verbose(1)
    assert is_verbose() is True
    set_verbose(False)
    assert not is_verbose()

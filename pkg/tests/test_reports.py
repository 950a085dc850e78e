import json

import numpy as np

from ellbethe.reports import CSV_HEADER, ResidualReport, dumps, jsonable, rel_residual


def test_pass_and_failure_rows():
    report = ResidualReport()
    report.add("small", "x = x", 1e-14, 1e-12)
    report.add("large", "x = y", 1.0, 1e-12)
    report.add("crashed", "x = z", float("inf"), 1e-12)
    assert not report.passed
    assert [r.check for r in report.failures()] == ["large", "crashed"]
    rows = json.loads(report.to_json())["rows"]
    assert rows[2]["residual"] == "inf" and rows[0]["pass"] is True


def test_timings_stay_out_of_files():
    report = ResidualReport()
    report.add("a", "b", 0.0, 1.0)
    report.seconds["a"] = 0.123
    assert "0.123" not in report.to_json() and "0.123" not in report.to_csv()
    assert report.to_csv().splitlines()[0] == ",".join(CSV_HEADER)


def test_extend_merges():
    a, b = ResidualReport(), ResidualReport()
    a.add("one", "", 0.0, 1.0)
    b.add("two", "", 0.0, 1.0)
    b.windows["cycle"] = [-6, 6]
    a.extend(b)
    assert [r.check for r in a.rows] == ["one", "two"] and a.windows == {"cycle": [-6, 6]}


def test_jsonable_and_dumps():
    payload = {"z": np.array([1 + 2j]), "n": np.int64(3), 2: (np.float64(0.5), np.bool_(True))}
    assert jsonable(payload) == {"z": [[1.0, 2.0]], "n": 3, "2": [0.5, True]}
    text = dumps({"b": 1, "a": 2})
    assert text.endswith("\n") and text.index('"a"') < text.index('"b"')


def test_rel_residual_zero_reference():
    assert rel_residual(np.array([3.0, 4.0]), np.zeros(2)) == 5.0
    assert rel_residual(np.array([1.0]), np.array([2.0])) == 0.5

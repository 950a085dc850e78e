"""One test per acceptance criterion; each prints a PASS/FAIL line.

Suites run once under the desk configuration and are shared between the
criteria that read from them.  Run this file directly for the summary alone:
``python3 tests/test_acceptance.py``.
"""

import functools
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from ellbethe.cli import main  # noqa: E402
from ellbethe.suites import desk_config, run_suite  # noqa: E402


@functools.lru_cache(maxsize=None)
def _suite(name):
    t0 = time.perf_counter()
    report = run_suite(name, desk_config())
    return report, time.perf_counter() - t0


def _record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _criterion(n, suite, prefixes, budget, expect_rows):
    report, seconds = _suite(suite)
    rows = [r for r in report.rows if r.check.startswith(prefixes)]
    failed = [r.check for r in rows if not r.passed]
    worst = max((r.residual / r.tolerance for r in rows), default=float("inf"))
    ok = len(rows) == expect_rows and not failed and seconds < budget
    detail = f"{len(rows)}/{expect_rows} rows, worst residual/tol {worst:.1e}, {seconds:.2f}s < {budget}s"
    if failed:
        detail += f"; failing: {', '.join(failed)}"
    assert _record(n, ok, detail), detail


def test_criterion_01_theta_kernel():
    _criterion(1, "theta", ("theta11 oddness", "integer period", "theta11 quasi-periodicity"), 1, 3)


def test_criterion_02_sklyanin_relations():
    _criterion(2, "sklyanin", ("quadratic relations",), 5, 3 * 5)


def test_criterion_03_spin_half_generators():
    _criterion(3, "sklyanin", ("spin-1/2 generators",), 1, 5)


def test_criterion_04_rll_yang_baxter_unitarity():
    _criterion(4, "sklyanin", ("RLL l=1/2", "RLL l=1,", "Yang-Baxter", "unitarity R^(1/2,1/2)"), 5, 4)


def test_criterion_05_intertwiner_actions():
    prefixes = ("twisted L on intertwiners", "twisted L on local pseudo-vacuum", "vacuum IRF weight")
    _criterion(5, "intertwiner", prefixes, 10, 2 * 2 * 5 + 2)


def test_criterion_06_bethe_dimension():
    _criterion(6, "bethe", ("basis size", "closed-path count"), 1, 6)


def test_criterion_07_z_commutes_with_r():
    _criterion(7, "bethe", ("R-check Z Z exchange",), 5, 2)


def test_criterion_08_monodromy_vacuum_and_exchange():
    prefixes = ("A on global vacuum", "C on global vacuum", "D on global vacuum", "B-B", "A-B", "D-B")
    _criterion(8, "monodromy", prefixes, 10, 6 * 5)


def test_criterion_09_two_side_formula():
    _criterion(9, "monodromy", ("two-side formula",), 10, 3)


def test_criterion_10_holonomicity():
    # one pair for N=2 and three for N=3, three draws each
    _criterion(10, "holonomic", ("compatibility A_",), 30, 3 * 1 + 3 * 3)


def test_criterion_11_weight_functions():
    prefixes = ("F difference equation", "product form", "Phi difference equation", "F zero and pole lattices")
    _criterion(11, "holonomic", prefixes, 5, 3 + 3 + 1 + 1)


def test_criterion_12_main_theorem():
    _criterion(12, "holonomic", ("difference equation j=", "window [-6,6] vs [-12,12]"), 60, 3)


def test_criterion_13_varphi_relation():
    _criterion(13, "holonomic", ("varphi relation all partitions",), 10, 3)


def test_criterion_14_determinism():
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        codes = [main(["verify", "all", "--out", str(Path(tmp) / d)]) for d in ("first", "second")]
        names = ("all_report.json", "all_residuals.csv")
        same = all((Path(tmp) / "first" / f).read_bytes() == (Path(tmp) / "second" / f).read_bytes() for f in names)
    seconds = time.perf_counter() - t0
    ok = same and codes == [0, 0] and seconds < 60
    detail = f"reports byte-identical: {same}, exit codes {codes}, {seconds:.1f}s < 60s"
    assert _record(14, ok, detail), detail


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

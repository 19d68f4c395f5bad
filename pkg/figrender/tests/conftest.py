"""Shared fixtures: input CSVs produced by the phasekit command line tool.

figrender talks to phasekit only through files, so the fixtures shell out to
the installed CLI instead of importing anything from it.
"""

import subprocess
import sys

import pytest


def run_phasekit(out_path, *args):
    proc = subprocess.run(
        [sys.executable, "-m", "phasekit", *args, "--out", str(out_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out_path


@pytest.fixture(scope="session")
def cli_csvs(tmp_path_factory):
    root = tmp_path_factory.mktemp("csvs")
    return {
        "a1": run_phasekit(root / "a1.csv", "figure1", "--variant", "a1", "--grid", "240"),
        "a2": run_phasekit(root / "a2.csv", "figure1", "--variant", "a2", "--grid", "240"),
        "b": run_phasekit(root / "b.csv", "figure1", "--variant", "b", "--grid", "360"),
        "dist1": run_phasekit(
            root / "dist1.csv",
            "dist", "--state", "pair:n=1", "--method", "radial", "--cutoff", "12", "--grid", "64",
        ),
        "dist2": run_phasekit(
            root / "dist2.csv",
            "dist", "--state", "pair:n=2", "--method", "pb", "--cutoff", "12", "--grid", "64",
        ),
        # the cat state needs ~150 basis states; a 256-point grid keeps the
        # rectangle-rule integral check alias-free
        "cat": run_phasekit(
            root / "cat.csv",
            "dist", "--state", "cat:alpha=-2,beta=8", "--method", "pb", "--grid", "256",
        ),
    }

"""End-to-end behavior of the command line interface."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from phasekit.cli import main
from phasekit.fock import (
    OperatorMatrix,
    build_state,
    density_from_pure,
    load_operator_file,
    save_operator_file,
)
from phasekit.phase_operator import pair_state_closed_form
from phasekit.wigner import PhaseGrid, phase_distribution_radial


def _read_csv(path):
    meta, columns, rows = {}, None, []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        assert header == "# phasekit v1"
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# columns="):
                columns = line[len("# columns="):].split(",")
            elif line.startswith("# "):
                key, _, value = line[2:].partition("=")
                meta[key] = value
            elif line:
                rows.append([float(x) for x in line.split(",")])
    return meta, columns, np.array(rows)


def _no_temp_droppings(directory):
    return not [p for p in os.listdir(directory) if ".tmp" in p or p.startswith(".phasekit-")]


def test_dist_matches_closed_form_at_512_points(tmp_path):
    out = tmp_path / "pair.csv"
    code = main(["dist", "--state", "pair:n=1", "--method", "radial",
                 "--grid", "512", "--out", str(out)])
    assert code == 0
    meta, columns, table = _read_csv(out)
    assert columns == ["theta", "value"]
    assert meta["state"] == "pair:n=1"
    assert meta["method"] == "wigner_radial"
    assert meta["M"] == "512"
    ref = (1 + math.sqrt(2) * np.cos(2 * table[:, 0])) / (2 * math.pi)
    assert np.max(np.abs(table[:, 1] - ref)) < 1e-6


def test_dist_round_trips_bit_exactly(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["dist", "--state", "pair:n=2", "--grid", "90", "--out", str(out)]) == 0
    _, _, table = _read_csv(out)
    grid = PhaseGrid(-math.pi, 90)
    dist = phase_distribution_radial(density_from_pure(build_state("pair:n=2", 4)), grid)
    np.testing.assert_array_equal(table[:, 0], grid.samples)
    np.testing.assert_array_equal(table[:, 1], dist.values)
    assert _no_temp_droppings(tmp_path)


def test_dist_flat_density_constant_column(tmp_path):
    out = tmp_path / "flat.csv"
    assert main(["dist", "--state", "fock:n=3", "--method", "pb",
                 "--grid", "64", "--out", str(out)]) == 0
    _, _, table = _read_csv(out)
    np.testing.assert_allclose(table[:, 1], 1 / (2 * math.pi), atol=1e-15)


def test_dist_operator_gate_and_usage_errors(tmp_path):
    out = tmp_path / "never.csv"
    assert main(["dist", "--state", "cat:alpha=-2,beta=8", "--method", "operator",
                 "--cutoff", "160", "--out", str(out)]) == 3
    assert not out.exists()
    assert main(["dist", "--state", "bogus:n=1", "--out", str(out)]) == 2
    assert main(["dist", "--state", "fock:n=0", "--method", "nonsense",
                 "--out", str(out)]) == 2
    assert main(["dist", "--state", "fock:n=0", "--grid", "3", "--out", str(out)]) == 2
    assert main(["dist", "--out", str(out)]) == 2
    assert not out.exists()
    assert _no_temp_droppings(tmp_path)


def test_dist_forced_junk_fails_numerics_without_partial_file(tmp_path):
    out = tmp_path / "junk.csv"
    code = main(["dist", "--state", "cat:alpha=-2,beta=8", "--method", "operator",
                 "--cutoff", "160", "--force-method", "operator", "--out", str(out)])
    assert code == 4
    assert not out.exists()
    assert _no_temp_droppings(tmp_path)


def test_dist_writes_to_stdout_by_default(capsys):
    assert main(["dist", "--state", "fock:n=0", "--grid", "8"]) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("# phasekit v1\n")
    assert captured.count("\n") == 7 + 8  # header, 6 metadata/columns lines, 8 rows


def test_closed_form_method_requires_pair_state(tmp_path):
    out = tmp_path / "cf.csv"
    assert main(["dist", "--state", "fock:n=2", "--method", "closed-form",
                 "--out", str(out)]) == 2
    assert main(["dist", "--state", "pair:n=2", "--method", "closed-form",
                 "--grid", "32", "--out", str(out)]) == 0
    _, _, table = _read_csv(out)
    ref = pair_state_closed_form(2, PhaseGrid(-math.pi, 32))
    np.testing.assert_array_equal(table[:, 1], ref.values)


def test_figure1_pair_variants(tmp_path):
    for variant, n in (("a1", 1), ("a2", 2)):
        out = tmp_path / f"{variant}.csv"
        assert main(["figure1", "--variant", variant, "--out", str(out)]) == 0
        meta, columns, table = _read_csv(out)
        assert meta["cutoff"] == "20"
        assert columns == ["theta", "wigner_radial", "wigner_operator",
                           "pegg_barnett", "closed_form_wigner", "closed_form_pb"]
        theta = table[:, 0]
        cf_w = table[:, columns.index("closed_form_wigner")]
        for name in ("wigner_radial", "wigner_operator"):
            assert np.max(np.abs(table[:, columns.index(name)] - cf_w)) < 1e-6
        pb_ref = (1 + np.cos(2 * n * theta)) / (2 * math.pi)
        assert np.max(np.abs(table[:, columns.index("pegg_barnett")] - pb_ref)) < 1e-10


def test_figure1_cat_overlay(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["figure1", "--variant", "b", "--out", str(out)]) == 0
    meta, columns, table = _read_csv(out)
    assert meta["state"] == "cat:alpha=-2,beta=8"
    assert int(meta["cutoff"]) >= 150
    assert columns == ["theta", "wigner_radial", "pegg_barnett"]
    h = 2 * math.pi / table.shape[0]
    for name in ("wigner_radial", "pegg_barnett"):
        vals = table[:, columns.index(name)]
        assert abs(vals.sum() * h - 1.0) < 1e-5
    assert table[:, columns.index("wigner_radial")].min() < 0
    assert table[:, columns.index("pegg_barnett")].min() >= 0


def test_figure1_rejects_unknown_variant(tmp_path):
    assert main(["figure1", "--variant", "c", "--out", str(tmp_path / "x.csv")]) == 2


def test_check_passes_at_reference_cutoff(capsys):
    assert main(["check", "--cutoff", "20"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 7
    assert "[FAIL]" not in out
    assert "7/7 checks passed at cutoff 20" in out


def test_check_degenerate_cutoff(capsys):
    assert main(["check", "--cutoff", "0"]) == 0
    assert "[FAIL]" not in capsys.readouterr().out


def test_check_reports_cancellation_when_forced_far_out(capsys):
    code = main(["check", "--cutoff", "200", "--force-method", "operator"])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL] cross-path" in out
    assert "cancellation overflow in the alternating sum" in out
    assert "worst element" in out


def test_dump_op_round_trip(tmp_path):
    out = tmp_path / "op.txt"
    assert main(["dump-op", "--op", "rho_w", "--cutoff", "12",
                 "--theta0", "0.5", "--out", str(out)]) == 0
    op = load_operator_file(out)
    assert op.cutoff == 12
    from phasekit.phase_operator import phase_operator_at

    np.testing.assert_array_equal(op.elems, phase_operator_at(0.5, 12).elems)
    assert _no_temp_droppings(tmp_path)


def test_dump_op_finite_basis_matrix(tmp_path):
    out = tmp_path / "phi.txt"
    assert main(["dump-op", "--op", "phi_s", "--cutoff", "8",
                 "--theta0", str(-math.pi), "--out", str(out)]) == 0
    from phasekit.pegg_barnett import phi_matrix

    op = load_operator_file(out)
    np.testing.assert_array_equal(op.elems, phi_matrix(8, -math.pi).elems)


def test_dump_op_gate_and_usage(tmp_path):
    out = tmp_path / "op.txt"
    assert main(["dump-op", "--op", "rho_w", "--cutoff", "160", "--out", str(out)]) == 3
    assert not out.exists()
    assert main(["dump-op", "--op", "rho_w", "--cutoff", "41",
                 "--force-method", "operator", "--out", str(out)]) == 0
    assert out.exists()
    assert main(["dump-op", "--op", "nonsense", "--out", str(out)]) == 2
    assert main(["dump-op", "--op", "rho_w", "--cutoff", "5"]) == 2  # no --out


def test_density_file_input(tmp_path):
    rho = density_from_pure(build_state("pair:n=1", 2))
    rho_path = tmp_path / "rho.txt"
    save_operator_file(OperatorMatrix(2, rho.elems), rho_path)

    out = tmp_path / "from_density.csv"
    assert main(["dist", "--state", f"density:{rho_path}", "--method", "pb",
                 "--grid", "48", "--out", str(out)]) == 0
    _, _, table = _read_csv(out)
    ref = (1 + np.cos(2 * table[:, 0])) / (2 * math.pi)
    np.testing.assert_allclose(table[:, 1], ref, atol=1e-12)

    # padding to a larger cutoff is allowed, truncation is refused
    assert main(["dist", "--state", f"density:{rho_path}", "--cutoff", "6",
                 "--grid", "48", "--out", str(out)]) == 0
    assert main(["dist", "--state", f"density:{rho_path}", "--cutoff", "1",
                 "--grid", "48", "--out", str(out)]) == 3


def test_config_file_fills_unset_options(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("state=pair:n=2\nmethod=closed-form\ngrid=16\n")
    out = tmp_path / "a.csv"
    assert main(["dist", "--config", str(cfg), "--out", str(out)]) == 0
    meta, _, table = _read_csv(out)
    assert meta["method"] == "closed_form"
    assert table.shape[0] == 16

    # explicit flags win over the config file
    assert main(["dist", "--config", str(cfg), "--method", "pb", "--grid", "8",
                 "--out", str(out)]) == 0
    meta, _, table = _read_csv(out)
    assert meta["method"] == "pegg_barnett"
    assert table.shape[0] == 8

    bad = tmp_path / "bad.txt"
    bad.write_text("unknown_key=1\n")
    assert main(["dist", "--state", "fock:n=0", "--config", str(bad),
                 "--out", str(out)]) == 2
    missing = tmp_path / "missing.txt"
    assert main(["dist", "--state", "fock:n=0", "--config", str(missing),
                 "--out", str(out)]) == 2


def test_no_subcommand_prints_help_and_fails():
    assert main([]) == 2


def test_installed_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "phasekit", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("phasekit ")

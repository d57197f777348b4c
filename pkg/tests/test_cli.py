"""End-to-end CLI behavior: artifact schemas, determinism, exit codes."""

import csv
import json

import pytest

from signedpd.cli import EXIT_CONFIG, EXIT_MODEL, EXIT_OK, main
from signedpd.harness import RUN_CSV_COLUMNS, SWEEP_CSV_COLUMNS


def write_cfg(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


BASE = """
network = complete(10)
mode = dyadic
seeds = 0, 1
max_steps = 200000
check_interval = 200
sample_interval = 500
"""


# ----------------------------------------------------------------- simulate


def test_simulate_writes_artifacts(tmp_path, capsys):
    cfg = write_cfg(tmp_path, BASE)
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 4  # csv + json per seed

    for seed in (0, 1):
        csv_path = out / f"run_seed{seed}.csv"
        json_path = out / f"run_seed{seed}.json"
        assert csv_path.exists() and json_path.exists()

        with open(csv_path) as fh:
            header = fh.readline().strip()
        assert header == ",".join(RUN_CSV_COLUMNS)
        rows = read_rows(csv_path)
        assert rows[0]["step"] == "0"
        fracs = [float(rows[0][c]) for c in
                 ("frac_UD", "frac_CO", "frac_UC")]
        assert sum(fracs) == pytest.approx(1.0, abs=1e-9)

        summary = json.loads(json_path.read_text())
        assert summary["seed"] == seed
        assert summary["config"]["network"] == "complete(10)"
        assert set(summary["final_type_counts"]) == {"UD", "CO", "UC"}
        assert isinstance(summary["absorbed"], bool)
        assert summary["steps"] == int(rows[-1]["step"])


def test_simulate_seed_flag_overrides(tmp_path):
    cfg = write_cfg(tmp_path, BASE)
    out = tmp_path / "single"
    assert main(["simulate", "--config", cfg, "--out", str(out),
                 "--seed", "5"]) == EXIT_OK
    assert sorted(p.name for p in out.iterdir()) == \
        ["run_seed5.csv", "run_seed5.json"]


def test_simulate_defaults_without_config(tmp_path):
    out = tmp_path / "d"
    assert main(["simulate", "--out", str(out), "--seed", "2",
                 "--max-steps", "5000"]) == EXIT_OK
    summary = json.loads((out / "run_seed2.json").read_text())
    assert summary["config"]["network"] == "erdos_renyi(30, 0.3)"
    assert summary["config"]["max_steps"] == 5000


def test_simulate_byte_identical_reruns(tmp_path):
    cfg = write_cfg(tmp_path, BASE)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", cfg, "--out", str(out_a)]) == EXIT_OK
    assert main(["simulate", "--config", cfg, "--out", str(out_b)]) == EXIT_OK
    for name in ("run_seed0.csv", "run_seed0.json",
                 "run_seed1.csv", "run_seed1.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_mode_flag_changes_dynamics(tmp_path):
    cfg = write_cfg(tmp_path, BASE)
    out = tmp_path / "tri"
    assert main(["simulate", "--config", cfg, "--out", str(out),
                 "--seed", "0", "--mode", "triadic"]) == EXIT_OK
    summary = json.loads((out / "run_seed0.json").read_text())
    assert summary["config"]["mode"] == "triadic"
    assert summary["triangle_coverage"] == 1.0  # complete graph


# -------------------------------------------------------------------- sweep


SWEEP = BASE + """
replicates = 3
sweep.p_neg = 0, 0.25
sweep.p_pos = 0.5, 0.75
"""


def test_sweep_csv_schema_and_row_count(tmp_path):
    cfg = write_cfg(tmp_path, SWEEP)
    out = tmp_path / "sw"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == EXIT_OK
    path = out / "sweep.csv"
    with open(path) as fh:
        assert fh.readline().strip() == ",".join(SWEEP_CSV_COLUMNS)
    rows = read_rows(path)
    assert len(rows) == 2 * 2 * 3  # cells x replicates
    # outer axis (file order: p_neg) varies slowest; replicates innermost
    assert [r["seed"] for r in rows[:3]] == ["0", "1", "2"]
    assert rows[0]["p_neg"] == "0" and rows[0]["p_pos"] == "0.5"
    assert rows[3]["p_pos"] == "0.75"
    assert rows[-1]["p_neg"] == "0.25" and rows[-1]["p_pos"] == "0.75"
    for r in rows:
        assert r["absorbed"] in ("true", "false")
        assert r["mode"] == "dyadic"


def test_sweep_deterministic(tmp_path):
    cfg = write_cfg(tmp_path, SWEEP)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", "--config", cfg, "--out", str(a)]) == EXIT_OK
    assert main(["sweep", "--config", cfg, "--out", str(b)]) == EXIT_OK
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()


def test_sweep_without_axes_is_config_error(tmp_path):
    cfg = write_cfg(tmp_path, BASE)
    assert main(["sweep", "--config", cfg,
                 "--out", str(tmp_path / "x")]) == EXIT_CONFIG


# ------------------------------------------------------------------ analyze


def test_analyze_dyads(tmp_path):
    out = tmp_path / "an"
    assert main(["analyze", "--kind", "dyads", "--out", str(out)]) == EXIT_OK
    dot = (out / "dyad_chain.dot").read_text()
    assert dot.count("peripheries=2") == 4
    report = json.loads((out / "dyad_analysis.json").read_text())
    assert report["state_count"] == 12
    assert sorted(report["absorbing"]) == \
        ["CO+CO", "CO-CO", "UC+UC", "UD-UD"]
    assert report["pairwise_dominance"]["UD,UC,+"] == "X_WINS"
    assert (out / "dyad_summary.txt").read_text().startswith("dyad chain:")


def test_analyze_triads(tmp_path):
    out = tmp_path / "an"
    assert main(["analyze", "--kind", "triads", "--mode", "triadic",
                 "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "triad_analysis.json").read_text())
    assert report["state_count"] == 56
    assert len(report["type_multisets"]) == 10
    assert set(report["closed_multisets"]) == \
        {"UD,UD,UD", "CO,CO,CO", "UC,UC,UC"}
    types_dot = (out / "triad_types.dot").read_text()
    assert types_dot.count("peripheries=2") == 3


def test_analyze_dominance_and_robustness(tmp_path):
    out = tmp_path / "an"
    assert main(["analyze", "--kind", "dominance", "--mode", "triadic",
                 "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "dominance.json").read_text())
    assert len(report["entries"]) == 9
    diag = [e for e in report["entries"] if e["invader"] == e["resident"]]
    assert all(e["outcome"] == "coexists" for e in diag)

    assert main(["analyze", "--kind", "robustness",
                 "--out", str(out)]) == EXIT_OK
    rob = json.loads((out / "robustness.json").read_text())
    assert {r["resident"] for r in rob["reports"]} == {"UD", "CO", "UC"}


def test_analyze_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["analyze", "--kind", "triads", "--mode", "triadic",
                     "--out", str(out)]) == EXIT_OK
    for name in ("triad_chain.dot", "triad_types.dot",
                 "triad_analysis.json", "triad_summary.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


# --------------------------------------------------------------- exit codes


def test_missing_config_file(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.cfg")]) \
        == EXIT_CONFIG


def test_bad_config_value(tmp_path):
    cfg = write_cfg(tmp_path, "p_pos = 0.9\np_neg = 0.9\n")
    assert main(["simulate", "--config", cfg,
                 "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_unknown_key(tmp_path):
    cfg = write_cfg(tmp_path, "walrus = 9\n")
    assert main(["simulate", "--config", cfg]) == EXIT_CONFIG


def test_triadic_without_triangles_is_model_error(tmp_path):
    # this sparse graph draw has no closed triangle
    cfg = write_cfg(tmp_path, """
network = erdos_renyi(20, 0.05)
mode = triadic
seeds = 1
max_steps = 100
""")
    assert main(["simulate", "--config", cfg,
                 "--out", str(tmp_path / "o")]) == EXIT_MODEL


def test_cli_entry_point_registered():
    from importlib.metadata import entry_points

    eps = entry_points(group="console_scripts")
    names = {ep.name for ep in eps}
    assert "signedpd" in names

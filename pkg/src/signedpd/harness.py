"""Batch execution and artifact serialization for the CLI.

Artifacts are deterministic: identical configuration and seeds produce
byte-identical files.  Per-run CSV columns are
(step, frac_UD, frac_CO, frac_UC, frac_pos_edges, frac_mutual_coop_edges);
floats use %.12g everywhere; JSON is sorted-key with two-space indent.

Each run derives two independent sub-seeds from its user seed — one for
network construction, one for the dynamics — so the same topology can be
replayed under different dynamics streams and vice versa.
"""

from __future__ import annotations

import json
from pathlib import Path

from .chains import (
    TransitionGraph,
    build_dyad_chain,
    build_triad_chain,
    dominance_matrix,
    mutant_robustness,
    pairwise_dominance_table,
    project_types,
)
from .config import ExperimentConfig, SweepSpec
from .dotexport import export_dot
from .dynamics import Mode, ModelParams, NoSelectableUnitsError, RunResult, run
from .games import Sign, StrategyType
from .motifs import TYPE_NAMES
from .network import build_network
from .rng import derive_seeds

RUN_CSV_COLUMNS = (
    "step", "frac_UD", "frac_CO", "frac_UC",
    "frac_pos_edges", "frac_mutual_coop_edges",
)

SWEEP_CSV_COLUMNS = (
    "network", "q_pos", "mode", "p_pos", "p_neg", "p_inv",
    "T", "R", "P", "S", "max_steps", "seed", "absorbed", "steps",
    "frac_UD", "frac_CO", "frac_UC", "frac_pos_edges",
    "frac_mutual_coop_edges",
)

ANALYZE_KINDS = ("dyads", "triads", "dominance", "robustness")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _write_csv(path: Path, columns, rows) -> Path:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return _write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, obj) -> Path:
    return _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def run_one(cfg: ExperimentConfig, seed: int) -> RunResult:
    """Execute a single seeded run of the configured experiment."""
    net_seed, dyn_seed = derive_seeds(seed, 2)
    network = build_network(cfg.network, q_pos=cfg.q_pos, seed=net_seed)
    result = run(
        network, cfg.params, cfg.max_steps,
        check_interval=cfg.check_interval,
        sample_interval=cfg.sample_interval,
        seed=dyn_seed,
    )
    result.seed = seed
    return result


def cmd_simulate(cfg: ExperimentConfig) -> list[Path]:
    """One run per configured seed; a CSV time series and JSON summary each."""
    out = Path(cfg.out_dir)
    written = []
    for seed in cfg.seeds:
        result = run_one(cfg, seed)
        csv_path = out / f"run_seed{seed}.csv"
        _write_csv(csv_path, RUN_CSV_COLUMNS, result.time_series)
        final = result.time_series[-1]
        summary = {
            "config": cfg.echo(),
            "seed": seed,
            "absorbed": result.absorbed,
            "steps": result.steps_taken,
            "final_type_counts": result.final_type_counts(),
            "final_frac_pos_edges": final.frac_pos_edges,
            "final_frac_mutual_coop_edges": final.frac_mutual_coop_edges,
            "triangle_coverage": result.triangle_coverage,
        }
        json_path = _write_json(out / f"run_seed{seed}.json", summary)
        written.extend([csv_path, json_path])
    return written


def cmd_sweep(cfg: ExperimentConfig, spec: SweepSpec) -> Path:
    """Every cell x replicate, one aggregate CSV row per run.

    Replicate r of every cell uses seed (first configured seed) + r, so
    cells are directly comparable seed-by-seed.
    """
    base_seed = cfg.seeds[0]
    rows = []
    for cell in spec.cells():
        cell_cfg = cfg.with_values(**{k: str(v) for k, v in cell.items()})
        for r in range(spec.replicates):
            seed = base_seed + r
            try:
                result = run_one(cell_cfg, seed)
            except NoSelectableUnitsError as exc:
                raise NoSelectableUnitsError(
                    f"sweep cell {cell} (seed {seed}): {exc}"
                ) from exc
            echo = cell_cfg.echo()
            final = result.time_series[-1]
            rows.append([
                echo["network"], echo["q_pos"], echo["mode"],
                echo["p_pos"], echo["p_neg"], echo["p_inv"],
                echo["T"], echo["R"], echo["P"], echo["S"],
                echo["max_steps"], seed,
                result.absorbed, result.steps_taken,
                final.frac_ud, final.frac_co, final.frac_uc,
                final.frac_pos_edges, final.frac_mutual_coop_edges,
            ])
    return _write_csv(Path(cfg.out_dir) / "sweep.csv", SWEEP_CSV_COLUMNS, rows)


def _sign_key(signs) -> str:
    return "".join("+" if Sign(s) == Sign.POSITIVE else "-" for s in signs)


def _params_echo(params: ModelParams) -> dict:
    return {
        "mode": params.mode.name.lower(),
        "p_pos": params.p_pos,
        "p_neg": params.p_neg,
        "p_inv": params.p_inv,
        "T": params.payoffs.T,
        "R": params.payoffs.R,
        "P": params.payoffs.P,
        "S": params.payoffs.S,
    }


def _chain_report(graph: TransitionGraph) -> dict:
    return {
        "params": _params_echo(graph.params),
        "state_count": len(graph.states),
        "absorbing": [st.label() for st in graph.absorbing],
    }


def _analyze_dyads(params: ModelParams, out: Path) -> list[Path]:
    graph = build_dyad_chain(params)
    table = pairwise_dominance_table(params.payoffs)
    report = _chain_report(graph)
    report["pairwise_dominance"] = {
        f"{TYPE_NAMES[x]},{TYPE_NAMES[y]},{_sign_key([s])}": dom.name
        for (x, y, s), dom in table.items()
    }
    lines = [f"dyad chain: {len(graph.states)} states, "
             f"{len(graph.absorbing)} absorbing"]
    lines += [f"  absorbing: {st.label()}" for st in graph.absorbing]
    return [
        _write_text(out / "dyad_chain.dot", export_dot(graph)),
        _write_json(out / "dyad_analysis.json", report),
        _write_text(out / "dyad_summary.txt", "\n".join(lines) + "\n"),
    ]


def _analyze_triads(params: ModelParams, out: Path) -> list[Path]:
    graph = build_triad_chain(params)
    proj = project_types(graph)
    report = _chain_report(graph)
    report["type_multisets"] = [proj.label(m) for m in proj.multisets]
    report["closed_multisets"] = [proj.label(m) for m in proj.closed_multisets()]
    lines = [
        f"triad chain: {len(graph.states)} states, "
        f"{len(graph.absorbing)} absorbing",
        f"type projection: {len(proj.multisets)} multisets, "
        f"{len(proj.closed_multisets())} closed",
    ]
    lines += [f"  absorbing: {st.label()}" for st in graph.absorbing]
    return [
        _write_text(out / "triad_chain.dot", export_dot(graph)),
        _write_text(out / "triad_types.dot", export_dot(proj)),
        _write_json(out / "triad_analysis.json", report),
        _write_text(out / "triad_summary.txt", "\n".join(lines) + "\n"),
    ]


def _analyze_dominance(params: ModelParams, out: Path) -> list[Path]:
    matrix = dominance_matrix(params)
    entries = []
    lines = ["invader vs resident (triad absorption):"]
    for (inv, res), entry in sorted(matrix.entries.items()):
        entries.append({
            "invader": TYPE_NAMES[inv],
            "resident": TYPE_NAMES[res],
            "outcome": entry.outcome.value,
            "invader_absorption": {
                _sign_key(s): p for s, p in entry.invader_absorption.items()
            },
            "resident_absorption": {
                _sign_key(s): p for s, p in entry.resident_absorption.items()
            },
        })
        lo = min(entry.invader_absorption.values())
        hi = max(entry.invader_absorption.values())
        lines.append(
            f"  {TYPE_NAMES[inv]:>2} vs {TYPE_NAMES[res]:>2}: "
            f"{entry.outcome.value:<9} invader absorption in "
            f"[{lo:.6g}, {hi:.6g}]"
        )
    report = {"params": _params_echo(params), "entries": entries}
    return [
        _write_json(out / "dominance.json", report),
        _write_text(out / "dominance_summary.txt", "\n".join(lines) + "\n"),
    ]


def _analyze_robustness(params: ModelParams, out: Path) -> list[Path]:
    reports = []
    lines = [f"single-mutant analysis, {params.mode.name.lower()} mode:"]
    for resident in StrategyType:
        rep = mutant_robustness(resident, params.mode, params)
        entries = [
            {
                "mutant": TYPE_NAMES[e.mutant],
                "initial_signs": _sign_key(e.initial_signs),
                "exit_probability": e.exit_probability,
                "takeover_probability": e.takeover_probability,
                "takeover_without_drift": e.takeover_without_drift,
            }
            for e in rep.entries
        ]
        reports.append({"resident": TYPE_NAMES[resident], "entries": entries})
        for mutant in StrategyType:
            if mutant == resident:
                continue
            note = " (drift only)" if rep.drift_only(mutant) else ""
            lines.append(
                f"  resident {TYPE_NAMES[resident]}, mutant "
                f"{TYPE_NAMES[mutant]}: can_exit="
                f"{str(rep.can_exit(mutant)).lower()}{note}"
            )
    report = {"params": _params_echo(params), "reports": reports}
    return [
        _write_json(out / "robustness.json", report),
        _write_text(out / "robustness_summary.txt", "\n".join(lines) + "\n"),
    ]


def cmd_analyze(kind: str, params: ModelParams, out_dir) -> list[Path]:
    """Run one exact-analysis report family and write its artifacts."""
    out = Path(out_dir)
    if kind == "dyads":
        return _analyze_dyads(params, out)
    if kind == "triads":
        return _analyze_triads(params, out)
    if kind == "dominance":
        return _analyze_dominance(params, out)
    if kind == "robustness":
        return _analyze_robustness(params, out)
    raise ValueError(f"unknown analysis kind {kind!r}; "
                     f"expected one of {', '.join(ANALYZE_KINDS)}")

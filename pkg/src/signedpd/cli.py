"""Command-line front end: simulate, sweep, analyze.

Exit codes: 0 on success, 2 for configuration problems (bad file, bad
key, invalid value), 3 for model errors at runtime such as triadic mode
on a network without triangles.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, build_config, load_config
from .dynamics import NoSelectableUnitsError
from .harness import ANALYZE_KINDS, cmd_analyze, cmd_simulate, cmd_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MODEL = 3


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH",
                   help="experiment config file (key = value lines)")
    p.add_argument("--out", metavar="DIR",
                   help="output directory (overrides the config)")
    p.add_argument("--seed", type=int, metavar="N",
                   help="run a single seed, overriding the config's list")
    p.add_argument("--mode", choices=("dyadic", "triadic"),
                   help="interaction mode override")
    p.add_argument("--max-steps", type=int, metavar="N", dest="max_steps",
                   help="step cap override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signedpd",
        description="Evolutionary prisoner's dilemma on signed networks: "
                    "simulation runs, parameter sweeps, and exact motif "
                    "stability analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the configured seeds, "
                           "writing per-run CSV + JSON artifacts")
    _add_common_flags(p_sim)

    p_sweep = sub.add_parser("sweep", help="run every sweep cell x replicate "
                             "from the config, writing one aggregate CSV")
    _add_common_flags(p_sweep)

    p_an = sub.add_parser("analyze", help="exact chain analysis reports "
                          "(DOT / JSON / text)")
    p_an.add_argument("--kind", choices=ANALYZE_KINDS, required=True,
                      help="which report family to produce")
    _add_common_flags(p_an)
    return parser


def _overrides(args) -> dict:
    return {
        "out": args.out,
        "seeds": None if args.seed is None else str(args.seed),
        "mode": args.mode,
        "max_steps": args.max_steps,
    }


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg, sweep = load_config(args.config, _overrides(args))
        else:
            cfg, sweep = build_config({}, _overrides(args)), None

        if args.command == "simulate":
            written = cmd_simulate(cfg)
        elif args.command == "sweep":
            if sweep is None:
                raise ConfigError(
                    "sweep needs a config file with at least one "
                    "'sweep.<key>' axis"
                )
            written = [cmd_sweep(cfg, sweep)]
        else:
            written = cmd_analyze(args.kind, cfg.params, cfg.out_dir)
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoSelectableUnitsError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL

    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

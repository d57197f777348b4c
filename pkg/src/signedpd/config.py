"""Experiment configuration: flat key = value files plus CLI overrides.

The format is a plain text file of ``key = value`` lines, ``#`` starts
a comment, blank lines are ignored.  Values are parsed as Python
literals when possible and kept as bare strings otherwise (so
``network = erdos_renyi(30, 0.3)`` needs no quoting).  List values use
commas; commas inside parentheses belong to the value, so an axis like
``sweep.network = complete(15), ring_lattice(30, 3)`` splits correctly.

Sweep axes are keys prefixed with ``sweep.``; their file order fixes
the cell enumeration order.  ``seeds`` accepts a single integer, a
comma list, or an inclusive ``lo..hi`` range.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .dynamics import Mode, ModelParams
from .games import PayoffMatrix
from .network import GraphSpec


class ConfigError(ValueError):
    """Bad configuration file or option values (CLI exit code 2)."""


_DEFAULTS = {
    "network": "erdos_renyi(30, 0.3)",
    "q_pos": 0.5,
    "mode": "dyadic",
    "p_pos": 0.5,
    "p_neg": 0.5,
    "p_inv": 1.0,
    "T": 5.0,
    "R": 3.0,
    "P": 1.0,
    "S": 0.0,
    "seeds": "0",
    "max_steps": 1_000_000,
    "check_interval": 1_000,
    "sample_interval": 100,
    "out": "runs",
    "replicates": 1,
}

_SWEEPABLE = {
    "network", "q_pos", "mode", "p_pos", "p_neg", "p_inv",
    "T", "R", "P", "S", "max_steps",
}

_INT_KEYS = {"max_steps", "check_interval", "sample_interval", "replicates"}
_FLOAT_KEYS = {"q_pos", "p_pos", "p_neg", "p_inv", "T", "R", "P", "S"}


def split_list(text: str) -> list[str]:
    """Split on top-level commas only (parentheses protect commas)."""
    items, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            items.append(text[start:i].strip())
            start = i + 1
    if depth != 0:
        raise ConfigError(f"unbalanced parentheses in {text!r}")
    items.append(text[start:].strip())
    return [it for it in items if it]


def parse_scalar(text: str):
    """Python literal if it parses, otherwise the bare string."""
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def read_config(path) -> dict[str, str]:
    """Raw key -> value-string mapping, preserving file order."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def parse_seeds(text: str) -> tuple[int, ...]:
    text = str(text).strip()
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        try:
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            raise ConfigError(f"bad seed range {text!r}") from None
        if hi < lo:
            raise ConfigError(f"empty seed range {text!r}")
        return tuple(range(lo, hi + 1))
    seeds = []
    for item in split_list(text):
        value = parse_scalar(item)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"seed {item!r} is not an integer")
        seeds.append(value)
    if not seeds:
        raise ConfigError("seed list is empty")
    return tuple(seeds)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one simulate invocation needs, fully validated."""

    network: GraphSpec
    q_pos: float
    params: ModelParams
    seeds: tuple[int, ...]
    max_steps: int
    check_interval: int
    sample_interval: int
    out_dir: str

    def echo(self) -> dict:
        """The exact effective settings, embedded in every artifact."""
        return {
            "network": str(self.network),
            "q_pos": self.q_pos,
            "mode": self.params.mode.name.lower(),
            "p_pos": self.params.p_pos,
            "p_neg": self.params.p_neg,
            "p_inv": self.params.p_inv,
            "T": self.params.payoffs.T,
            "R": self.params.payoffs.R,
            "P": self.params.payoffs.P,
            "S": self.params.payoffs.S,
            "seeds": list(self.seeds),
            "max_steps": self.max_steps,
            "check_interval": self.check_interval,
            "sample_interval": self.sample_interval,
        }

    def with_values(self, **kv) -> "ExperimentConfig":
        """Copy with flat keys (as in the file format) replaced."""
        merged = self.as_mapping()
        merged.update(kv)
        return build_config(merged)

    def as_mapping(self) -> dict:
        m = self.echo()
        m["seeds"] = ", ".join(str(s) for s in self.seeds)
        m["out"] = self.out_dir
        return m


@dataclass(frozen=True)
class SweepSpec:
    """Ordered parameter axes plus replicates per cell."""

    axes: tuple[tuple[str, tuple], ...]
    replicates: int

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        for key, values in self.axes:
            if key not in _SWEEPABLE:
                raise ConfigError(f"cannot sweep over {key!r}")
            if not values:
                raise ConfigError(f"sweep axis {key!r} has no values")

    def cells(self) -> list[dict]:
        """Cartesian product in axis file order (outer to inner)."""
        out = [{}]
        for key, values in self.axes:
            out = [dict(cell, **{key: v}) for cell in out for v in values]
        return out


def _coerce(key: str, value):
    if isinstance(value, str):
        value = parse_scalar(value)
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {value!r}") from None
    return value


def build_config(mapping: dict, overrides: Optional[dict] = None) -> ExperimentConfig:
    """Validate a flat mapping (file values and/or CLI overrides).

    Raises ConfigError naming the offending key on any bad value.
    """
    merged = dict(_DEFAULTS)
    for source in (mapping, overrides or {}):
        for key, value in source.items():
            if value is None or key.startswith("sweep."):
                continue
            if key not in _DEFAULTS:
                raise ConfigError(f"unknown configuration key {key!r}")
            merged[key] = value

    try:
        network = GraphSpec.parse(str(merged["network"]))
    except ValueError as exc:
        raise ConfigError(f"network: {exc}") from None
    q_pos = _coerce("q_pos", merged["q_pos"])
    if not 0.0 <= q_pos <= 1.0:
        raise ConfigError(f"q_pos must be in [0, 1], got {q_pos}")
    try:
        mode = Mode.from_name(str(merged["mode"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        payoffs = PayoffMatrix(
            T=_coerce("T", merged["T"]), R=_coerce("R", merged["R"]),
            P=_coerce("P", merged["P"]), S=_coerce("S", merged["S"]),
        )
        params = ModelParams(
            p_pos=_coerce("p_pos", merged["p_pos"]),
            p_neg=_coerce("p_neg", merged["p_neg"]),
            p_inv=_coerce("p_inv", merged["p_inv"]),
            mode=mode,
            payoffs=payoffs,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    seeds = parse_seeds(merged["seeds"])
    ints = {k: _coerce(k, merged[k])
            for k in ("max_steps", "check_interval", "sample_interval")}
    for k, v in ints.items():
        if v < 1:
            raise ConfigError(f"{k} must be >= 1, got {v}")
    return ExperimentConfig(
        network=network,
        q_pos=q_pos,
        params=params,
        seeds=seeds,
        max_steps=ints["max_steps"],
        check_interval=ints["check_interval"],
        sample_interval=ints["sample_interval"],
        out_dir=str(merged["out"]),
    )


def build_sweep(mapping: dict) -> Optional[SweepSpec]:
    """Extract sweep axes (file order) or None when no axis is present."""
    axes = []
    for key, value in mapping.items():
        if not key.startswith("sweep."):
            continue
        axis = key[len("sweep."):]
        values = tuple(parse_scalar(v) for v in split_list(str(value)))
        axes.append((axis, values))
    if not axes:
        return None
    replicates = _coerce("replicates", mapping.get("replicates", 1))
    return SweepSpec(axes=tuple(axes), replicates=replicates)


def load_config(path, overrides: Optional[dict] = None
                ) -> tuple[ExperimentConfig, Optional[SweepSpec]]:
    raw = read_config(path)
    return build_config(raw, overrides), build_sweep(raw)

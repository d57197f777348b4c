"""The iterated update loop: select, play, rewrite signs, invade.

``run`` drives the active kernel backend for whole trajectories;
``select_unit`` / ``update_sign`` / ``apply_invasion`` / ``step`` expose the
individual micro-step stages with the same draw order, so composing them by
hand replays exactly what the kernel does (a test pins this).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import core
from .games import Action, DEFAULT_PAYOFFS, PayoffMatrix, Sign
from .network import SignedNetwork
from .rng import SplitMix64


class Mode(IntEnum):
    DYADIC = 0
    TRIADIC = 1

    @classmethod
    def from_name(cls, name: str) -> "Mode":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"mode must be 'dyadic' or 'triadic', got {name!r}") from None


class NoSelectableUnitsError(RuntimeError):
    """Raised when the configured mode has nothing to select (triadic mode
    on a triangle-free network, or dyadic mode on an edgeless one)."""


@dataclass(frozen=True)
class ModelParams:
    """Transition probabilities and interaction mode.

    p_pos/p_neg govern mixed-action sign rewrites (residual 1 - p_pos - p_neg
    leaves the sign unchanged); p_inv is the per-step invasion probability.
    """

    p_pos: float = 0.5
    p_neg: float = 0.5
    p_inv: float = 1.0
    mode: Mode = Mode.DYADIC
    payoffs: PayoffMatrix = DEFAULT_PAYOFFS

    def __post_init__(self):
        if self.p_pos < 0.0 or self.p_neg < 0.0:
            raise ValueError("p_pos and p_neg must be non-negative")
        if self.p_pos + self.p_neg > 1.0:
            raise ValueError("p_pos + p_neg must not exceed 1")
        if not 0.0 < self.p_inv <= 1.0:
            raise ValueError("p_inv must lie in (0, 1]")
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(self.mode))


@dataclass
class RunState:
    """Mutable state of one run; the rng is the sole source of randomness."""

    network: SignedNetwork
    rng: SplitMix64
    step_count: int = 0

    @classmethod
    def fresh(cls, network: SignedNetwork, seed: int) -> "RunState":
        return cls(network=network, rng=SplitMix64(seed))


class TimeSample(NamedTuple):
    step: int
    frac_ud: float
    frac_co: float
    frac_uc: float
    frac_pos_edges: float
    frac_mutual_coop_edges: float


@dataclass
class RunResult:
    final_types: np.ndarray
    final_signs: np.ndarray
    absorbed: bool
    steps_taken: int
    time_series: list[TimeSample]
    triangle_coverage: float
    seed: int

    def final_type_counts(self) -> dict[str, int]:
        from .games import StrategyType

        return {
            t.name: int(np.count_nonzero(self.final_types == int(t)))
            for t in StrategyType
        }


def _kernel_args(network: SignedNetwork, params: ModelParams):
    m = params.payoffs
    return (
        network.types, network.signs, network.edge_a, network.edge_b,
        network.triangles.triples, network.triangles.edge_slots,
        int(params.mode), m.T, m.R, m.P, m.S,
        params.p_pos, params.p_neg, params.p_inv,
    )


def _require_units(network: SignedNetwork, mode: Mode) -> None:
    if mode == Mode.DYADIC and network.edge_count == 0:
        raise NoSelectableUnitsError("dyadic mode needs at least one edge")
    if mode == Mode.TRIADIC and len(network.triangles) == 0:
        raise NoSelectableUnitsError(
            "triadic mode needs at least one closed triangle; "
            "this network has none"
        )


def select_unit(state: RunState, params: ModelParams) -> tuple[int, ...]:
    """Uniform draw of an edge (dyadic) or triangle (triadic)."""
    net = state.network
    _require_units(net, params.mode)
    if params.mode == Mode.DYADIC:
        n = net.edge_count
        e = state.rng.next_below(n) if n > 1 else 0
        return (int(net.edge_a[e]), int(net.edge_b[e]))
    n = len(net.triangles)
    t = state.rng.next_below(n) if n > 1 else 0
    return tuple(int(v) for v in net.triangles.triples[t])


def update_sign(actions: tuple[Action, Action], current: Sign,
                params: ModelParams, rng: SplitMix64) -> Sign:
    """New sign of a tie after its two endpoints acted."""
    a, b = actions
    if a == b:
        return Sign.POSITIVE if a == Action.COOPERATE else Sign.NEGATIVE
    u = rng.next_double()
    if u < params.p_pos:
        return Sign.POSITIVE
    if u < params.p_pos + params.p_neg:
        return Sign.NEGATIVE
    return current


def apply_invasion(network: SignedNetwork,
                   participants: Sequence[tuple[int, float]],
                   params: ModelParams,
                   rng: SplitMix64) -> Optional[tuple[int, int]]:
    """Payoff-ranked type replacement.

    With probability p_inv: the invader is uniform over the maximal-payoff
    participants, the target uniform over the rest, and the target's type is
    overwritten.  Returns (invader node, target node) when an event fired.
    Selection draws are skipped when only one candidate exists.
    """
    if rng.next_double() >= params.p_inv:
        return None
    pays = [p for _, p in participants]
    pmax = max(pays)
    maximal = [i for i, p in enumerate(pays) if p == pmax]
    if len(maximal) == 1:
        inv = maximal[0]
    else:
        inv = maximal[rng.next_below(len(maximal))]
    others = [i for i in range(len(participants)) if i != inv]
    if len(others) == 1:
        tgt = others[0]
    else:
        tgt = others[rng.next_below(len(others))]
    inv_node = participants[inv][0]
    tgt_node = participants[tgt][0]
    network.set_type(tgt_node, network.get_type(inv_node))
    return (inv_node, tgt_node)


def step(state: RunState, params: ModelParams) -> None:
    """One micro-step: select, play, rewrite signs, invade."""
    _require_units(state.network, params.mode)
    state.rng.state = core.kernel.step_once(
        *_kernel_args(state.network, params), state.rng.state
    )
    state.step_count += 1


def is_absorbing(state: RunState, params: ModelParams) -> bool:
    """True iff no selectable unit can change any sign or type with
    positive probability."""
    return bool(core.kernel.check_absorbing(*_kernel_args(state.network, params)))


def run(network: SignedNetwork, params: ModelParams, max_steps: int,
        check_interval: int = 1000, sample_interval: int = 100,
        seed: int = 0) -> RunResult:
    """Iterate until absorbed or max_steps, mutating ``network`` in place.

    The absorbing check runs before the first step and then every
    check_interval steps; samples are recorded at step 0, every
    sample_interval steps, and at termination.  Identical arguments replay
    identical results on any backend.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    if check_interval < 1 or sample_interval < 1:
        raise ValueError("check_interval and sample_interval must be >= 1")
    _require_units(network, params.mode)

    steps, absorbed, raw_samples, _ = core.kernel.run_sim(
        *_kernel_args(network, params),
        max_steps, check_interval, sample_interval, SplitMix64(seed).state,
    )
    return RunResult(
        final_types=network.types.copy(),
        final_signs=network.signs.copy(),
        absorbed=bool(absorbed),
        steps_taken=int(steps),
        time_series=[TimeSample(*row) for row in raw_samples],
        triangle_coverage=network.triangles.coverage,
        seed=seed,
    )

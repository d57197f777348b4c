"""Exact one-step Markov chains over dyad and triad states.

This module re-derives the dynamics analytically: for a given motif
state it enumerates every stochastic branch of a single micro-step
(sign-update outcomes per edge, times the invasion event) and
accumulates exact probabilities onto canonical successor states.  It
never calls the simulation kernels — the Monte Carlo and analytic
routes stay independent so they can check each other.

Type-changing transitions are annotated ``strict`` (the invader earned
strictly more than the agent it replaced) or ``drift`` (equal payoffs,
replacement by the coin-flip rule).  ``drift_invasions=False`` builds
the variant chain in which equal-payoff invasions are no-ops, which
isolates what selection alone can do.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .dynamics import ModelParams, Mode
from .games import (
    Dominance,
    PayoffMatrix,
    Sign,
    StrategyType,
    pairwise_dominance,
    play_dyad,
    play_triad,
)
from .motifs import (
    MotifState,
    enumerate_dyad_states,
    enumerate_triad_states,
)

_ROW_SUM_TOL = 1e-12
_ABSORB_TOL = 1e-12
_SOLVER_TOL = 1e-10


class Branch(NamedTuple):
    """One stochastic outcome of a single micro-step on a labeled motif."""

    prob: float
    types: tuple[StrategyType, ...]
    signs: tuple[Sign, ...]
    change: str  # "none" | "strict" | "drift"


def _sign_outcomes(act_x, act_y, current, p_pos, p_neg):
    """Possible new signs of one edge given the two actions across it.

    Unanimous actions rewrite the sign deterministically (cooperation
    means positive, defection negative — the sign and action codes
    coincide); mixed actions branch three ways, with mass 1-p_pos-p_neg
    leaving the sign as it was.
    """
    if act_x == act_y:
        return ((1.0, Sign(int(act_x))),)
    out = []
    if p_pos > 0.0:
        out.append((p_pos, Sign.POSITIVE))
    if p_neg > 0.0:
        out.append((p_neg, Sign.NEGATIVE))
    rest = 1.0 - p_pos - p_neg
    if rest > 0.0:
        out.append((rest, Sign(current)))
    return tuple(out)


def _invasion_outcomes(types, payoffs, p_inv):
    """Type-vector branches of the invasion event.

    The invader is uniform over the maximal-payoff participants, the
    target uniform over the rest, and the target adopts the invader's
    type.  Replacements between equal payoffs are tagged ``drift``.
    """
    out = []
    if p_inv < 1.0:
        out.append((1.0 - p_inv, tuple(types), "none"))
    if p_inv <= 0.0:
        return out
    k = len(types)
    pmax = max(payoffs)
    top = [i for i in range(k) if payoffs[i] == pmax]
    share = p_inv / (len(top) * (k - 1))
    for inv in top:
        for tgt in range(k):
            if tgt == inv:
                continue
            if types[tgt] == types[inv]:
                out.append((share, tuple(types), "none"))
                continue
            new_types = list(types)
            new_types[tgt] = types[inv]
            kind = "strict" if payoffs[inv] > payoffs[tgt] else "drift"
            out.append((share, tuple(new_types), kind))
    return out


def dyad_branches(types, sign, params: ModelParams) -> list[Branch]:
    """Exact one-step branches of a labeled dyad state."""
    outcome = play_dyad(types[0], types[1], sign, params.payoffs)
    sign_brs = _sign_outcomes(
        outcome.actions[0], outcome.actions[1], sign, params.p_pos, params.p_neg
    )
    type_brs = _invasion_outcomes(types, outcome.payoffs, params.p_inv)
    return [
        Branch(ps * pt, ty, (s,), kind)
        for ps, s in sign_brs
        for pt, ty, kind in type_brs
    ]


def triad_branches(types, signs, params: ModelParams) -> list[Branch]:
    """Exact one-step branches of a labeled triad state."""
    outcome = play_triad(tuple(types), tuple(signs), params.payoffs)
    per_slot = [
        _sign_outcomes(x, y, signs[slot], params.p_pos, params.p_neg)
        for slot, (x, y) in enumerate(outcome.edge_actions)
    ]
    type_brs = _invasion_outcomes(types, outcome.payoffs, params.p_inv)
    branches = []
    for combo in itertools.product(*per_slot):
        ps = combo[0][0] * combo[1][0] * combo[2][0]
        new_signs = (combo[0][1], combo[1][1], combo[2][1])
        for pt, ty, kind in type_brs:
            branches.append(Branch(ps * pt, ty, new_signs, kind))
    return branches


def step_distribution(state: MotifState, params: ModelParams,
                      drift_invasions: bool = True) -> dict[MotifState, float]:
    """Labeled one-step successor distribution of a labeled state.

    This is the analytic counterpart of the kernels' single-step
    samplers; the oracle tests compare the two.
    """
    if state.is_dyad:
        branches = dyad_branches(state.types, state.signs[0], params)
    else:
        branches = triad_branches(state.types, state.signs, params)
    dist: dict[MotifState, float] = {}
    for br in branches:
        types = state.types if (br.change == "drift" and not drift_invasions) else br.types
        succ = MotifState(state.kind, types, br.signs)
        dist[succ] = dist.get(succ, 0.0) + br.prob
    return dist


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    """Exact Markov chain over canonical motif states.

    ``probs[i, j]`` is the one-step probability from ``states[i]`` to
    ``states[j]``; rows sum to 1 within 1e-12.  ``strict_edges`` and
    ``drift_edges`` mark (i, j) pairs with at least one contributing
    type replacement of that kind.
    """

    kind: str
    states: tuple[MotifState, ...]
    probs: np.ndarray
    strict_edges: frozenset[tuple[int, int]]
    drift_edges: frozenset[tuple[int, int]]
    params: ModelParams

    @cached_property
    def _index(self) -> dict[MotifState, int]:
        return {st: i for i, st in enumerate(self.states)}

    def index_of(self, state: MotifState) -> int:
        return self._index[state.canonical()]

    def successors(self, state: MotifState) -> list[tuple[MotifState, float]]:
        i = self.index_of(state)
        row = self.probs[i]
        return [(self.states[j], row[j]) for j in np.nonzero(row)[0]]

    def edges(self) -> dict[MotifState, list[tuple[MotifState, float]]]:
        return {st: self.successors(st) for st in self.states}

    @cached_property
    def absorbing_indices(self) -> tuple[int, ...]:
        diag = np.diag(self.probs)
        return tuple(int(i) for i in np.nonzero(diag >= 1.0 - _ABSORB_TOL)[0])

    @property
    def absorbing(self) -> tuple[MotifState, ...]:
        return tuple(self.states[i] for i in self.absorbing_indices)

    def is_absorbing_state(self, state: MotifState) -> bool:
        return self.index_of(state) in set(self.absorbing_indices)


def _build_chain(kind, states, branch_fn, params, drift_invasions) -> TransitionGraph:
    index = {st: i for i, st in enumerate(states)}
    n = len(states)
    probs = np.zeros((n, n))
    strict_edges: set[tuple[int, int]] = set()
    drift_edges: set[tuple[int, int]] = set()
    for i, st in enumerate(states):
        for br in branch_fn(st, params):
            change = br.change
            types = br.types
            if change == "drift" and not drift_invasions:
                types, change = st.types, "none"
            j = index[MotifState(kind, types, br.signs).canonical()]
            probs[i, j] += br.prob
            if change == "strict":
                strict_edges.add((i, j))
            elif change == "drift":
                drift_edges.add((i, j))
        total = probs[i].sum()
        if abs(total - 1.0) > _ROW_SUM_TOL:
            raise RuntimeError(
                f"branch probabilities for {st} sum to {total!r}, not 1"
            )
    return TransitionGraph(
        kind=kind,
        states=tuple(states),
        probs=probs,
        strict_edges=frozenset(strict_edges),
        drift_edges=frozenset(drift_edges),
        params=params,
    )


def build_dyad_chain(params: ModelParams,
                     drift_invasions: bool = True) -> TransitionGraph:
    """Exact chain over the 12 canonical dyad states."""
    return _build_chain(
        "dyad",
        enumerate_dyad_states(),
        lambda st, p: dyad_branches(st.types, st.signs[0], p),
        params,
        drift_invasions,
    )


def build_triad_chain(params: ModelParams,
                      drift_invasions: bool = True) -> TransitionGraph:
    """Exact chain over the canonical triad states."""
    return _build_chain(
        "triad",
        enumerate_triad_states(),
        lambda st, p: triad_branches(st.types, st.signs, p),
        params,
        drift_invasions,
    )


def absorbing_states(graph: TransitionGraph) -> list[MotifState]:
    """States whose only transition is a probability-1 self-loop."""
    return list(graph.absorbing)


# ---------------------------------------------------------------------------
# Absorption probabilities


def absorption_probabilities(
    graph: TransitionGraph, starts: Iterable[MotifState]
) -> dict[MotifState, dict[MotifState, float]]:
    """Exact absorption probabilities from each start state.

    Restricted to the set reachable from ``starts``; solves the linear
    system (I - Q) B = R over the reachable transient states and checks
    the residual against 1e-10.  Raises if some reachable state cannot
    reach an absorbing state (the chain would not absorb from there).
    """
    start_idx = []
    seen = set()
    for st in starts:
        i = graph.index_of(st)
        if i not in seen:
            seen.add(i)
            start_idx.append(i)

    succ_of = [np.nonzero(graph.probs[i])[0] for i in range(len(graph.states))]
    reachable = set(start_idx)
    frontier = list(start_idx)
    while frontier:
        i = frontier.pop()
        for j in succ_of[i]:
            if int(j) not in reachable:
                reachable.add(int(j))
                frontier.append(int(j))

    absorbing = [i for i in graph.absorbing_indices if i in reachable]
    transient = sorted(reachable - set(absorbing))

    # Every reachable transient state must be able to reach absorption.
    can_absorb = set(absorbing)
    changed = True
    while changed:
        changed = False
        for i in transient:
            if i not in can_absorb and any(int(j) in can_absorb for j in succ_of[i]):
                can_absorb.add(i)
                changed = True
    stuck = [i for i in transient if i not in can_absorb]
    if stuck:
        names = ", ".join(str(graph.states[i]) for i in stuck)
        raise RuntimeError(f"states never absorb from here: {names}")

    b_rows: dict[int, np.ndarray] = {}
    if transient:
        t_pos = {i: k for k, i in enumerate(transient)}
        q = graph.probs[np.ix_(transient, transient)]
        r = graph.probs[np.ix_(transient, absorbing)]
        lhs = np.eye(len(transient)) - q
        b = np.linalg.solve(lhs, r)
        resid = np.abs(lhs @ b - r).max()
        if resid > _SOLVER_TOL:
            raise RuntimeError(f"absorption solve residual {resid:g} > {_SOLVER_TOL:g}")
        for i in transient:
            b_rows[i] = b[t_pos[i]]

    out: dict[MotifState, dict[MotifState, float]] = {}
    for i in start_idx:
        if i in set(absorbing):
            row = {graph.states[i]: 1.0}
        else:
            row = {
                graph.states[a]: float(b_rows[i][k])
                for k, a in enumerate(absorbing)
                if b_rows[i][k] > 0.0
            }
        out[graph.states[i]] = row
    return out


def _class_probability(row: dict[MotifState, float], member_type) -> float:
    """Total absorption mass on states whose types are all ``member_type``."""
    return sum(
        p for st, p in row.items() if all(t == member_type for t in st.types)
    )


# ---------------------------------------------------------------------------
# Dominance and robustness reports


class InvasionOutcome(Enum):
    """How a single-invader mixed triad resolves against a resident type."""

    DOMINATES = "dominates"
    COEXISTS = "coexists"
    REPELLED = "repelled"


class DominanceEntry(NamedTuple):
    invader: StrategyType
    resident: StrategyType
    outcome: InvasionOutcome
    # keyed by the labeled initial signs (s_ab, s_bc, s_ca) of the
    # (invader, resident, resident) triad
    invader_absorption: dict[tuple[Sign, Sign, Sign], float]
    resident_absorption: dict[tuple[Sign, Sign, Sign], float]


@dataclass(frozen=True, eq=False)
class DominanceMatrix:
    """Pairwise invader-vs-resident absorption analysis on triads."""

    params: ModelParams
    entries: dict[tuple[StrategyType, StrategyType], DominanceEntry]

    def outcome(self, invader, resident) -> InvasionOutcome:
        return self.entries[(StrategyType(invader), StrategyType(resident))].outcome


def dominance_matrix(params: ModelParams,
                     graph: Optional[TransitionGraph] = None) -> DominanceMatrix:
    """Classify every ordered type pair by exact triad absorption.

    For invader X and resident Y, starts the chain at (X, Y, Y) under
    every initial sign configuration.  ``DOMINATES`` means absorption
    into the homogeneous-X class is certain from all of them,
    ``REPELLED`` means it never happens, ``COEXISTS`` anything else.
    Raw probabilities are kept so other cutoffs can be applied later.
    """
    if graph is None:
        graph = build_triad_chain(params)
    entries = {}
    all_signs = list(itertools.product(Sign, repeat=3))
    for inv, res in itertools.product(StrategyType, repeat=2):
        starts = {s: MotifState.triad((inv, res, res), s) for s in all_signs}
        rows = absorption_probabilities(graph, starts.values())
        inv_abs = {}
        res_abs = {}
        for s, st in starts.items():
            row = rows[st.canonical()]
            inv_abs[s] = _class_probability(row, inv)
            res_abs[s] = _class_probability(row, res)
        if inv == res:
            outcome = InvasionOutcome.COEXISTS
        elif min(inv_abs.values()) >= 1.0 - _SOLVER_TOL:
            outcome = InvasionOutcome.DOMINATES
        elif max(inv_abs.values()) <= _SOLVER_TOL:
            outcome = InvasionOutcome.REPELLED
        else:
            outcome = InvasionOutcome.COEXISTS
        entries[(inv, res)] = DominanceEntry(inv, res, outcome, inv_abs, res_abs)
    return DominanceMatrix(params=params, entries=entries)


class RobustnessEntry(NamedTuple):
    mutant: StrategyType
    initial_signs: tuple[Sign, ...]
    # probability the chain does NOT absorb into the all-resident class
    exit_probability: float
    # probability the mutant type takes the whole motif over
    takeover_probability: float
    # same, in the chain where equal-payoff invasions are no-ops
    takeover_without_drift: float


@dataclass(frozen=True, eq=False)
class RobustnessReport:
    """Can a single mutant disturb a homogeneous resident motif?"""

    resident: StrategyType
    mode: Mode
    params: ModelParams
    entries: tuple[RobustnessEntry, ...]

    def can_exit(self, mutant) -> bool:
        m = StrategyType(mutant)
        return any(
            e.exit_probability > _SOLVER_TOL for e in self.entries if e.mutant == m
        )

    def drift_only(self, mutant) -> bool:
        """Mutant can take over, but only through equal-payoff replacements."""
        m = StrategyType(mutant)
        mine = [e for e in self.entries if e.mutant == m]
        return (
            any(e.takeover_probability > _SOLVER_TOL for e in mine)
            and all(e.takeover_without_drift <= _SOLVER_TOL for e in mine)
        )


def mutant_robustness(resident, mode, params: ModelParams) -> RobustnessReport:
    """Exact fate of one mutant inside an otherwise-homogeneous motif.

    Dyadic mode pairs the mutant with one resident; triadic mode embeds
    it in a triangle with two residents.  Every initial sign
    configuration is reported separately.
    """
    resident = StrategyType(resident)
    mode = Mode(mode)
    if mode == Mode.DYADIC:
        graph = build_dyad_chain(params)
        strict = build_dyad_chain(params, drift_invasions=False)
        sign_sets = [(s,) for s in Sign]
        make = lambda m, s: MotifState.dyad(m, resident, s[0])
    else:
        graph = build_triad_chain(params)
        strict = build_triad_chain(params, drift_invasions=False)
        sign_sets = list(itertools.product(Sign, repeat=3))
        make = lambda m, s: MotifState.triad((m, resident, resident), s)

    entries = []
    for mutant in StrategyType:
        if mutant == resident:
            continue
        starts = {s: make(mutant, s) for s in sign_sets}
        rows = absorption_probabilities(graph, starts.values())
        strict_rows = absorption_probabilities(strict, starts.values())
        for s, st in starts.items():
            row = rows[st.canonical()]
            srow = strict_rows[st.canonical()]
            entries.append(
                RobustnessEntry(
                    mutant=mutant,
                    initial_signs=tuple(s),
                    exit_probability=1.0 - _class_probability(row, resident),
                    takeover_probability=_class_probability(row, mutant),
                    takeover_without_drift=_class_probability(srow, mutant),
                )
            )
    return RobustnessReport(
        resident=resident, mode=mode, params=params, entries=tuple(entries)
    )


# ---------------------------------------------------------------------------
# Type-multiset projection


@dataclass(frozen=True, eq=False)
class TypeProjection:
    """Quotient of a chain onto type multisets, signs forgotten.

    Unlike the chain itself this is not a stochastic matrix — the
    probability of leaving a multiset depends on the signed state
    within it — so only the existence of cross-multiset transitions is
    recorded, with the strict/drift annotation carried over.
    """

    kind: str
    multisets: tuple[tuple[StrategyType, ...], ...]
    edges: frozenset[tuple[int, int]]
    strict_edges: frozenset[tuple[int, int]]
    drift_edges: frozenset[tuple[int, int]]

    def index_of(self, multiset) -> int:
        key = tuple(sorted(StrategyType(t) for t in multiset))
        return self.multisets.index(key)

    def outgoing(self, multiset) -> list[tuple[StrategyType, ...]]:
        i = self.index_of(multiset)
        return [self.multisets[j] for (a, j) in sorted(self.edges) if a == i]

    def closed_multisets(self) -> list[tuple[StrategyType, ...]]:
        """Multisets with no outgoing cross-multiset transition."""
        sources = {i for (i, _) in self.edges}
        return [m for k, m in enumerate(self.multisets) if k not in sources]

    def label(self, multiset) -> str:
        from .motifs import TYPE_NAMES

        return ",".join(TYPE_NAMES[t] for t in multiset)


def project_types(graph: TransitionGraph) -> TypeProjection:
    """Forget signs: one node per type multiset, edges where any signed
    transition crosses between multisets."""
    msets = sorted({st.type_multiset() for st in graph.states})
    m_index = {m: k for k, m in enumerate(msets)}
    state_m = [m_index[st.type_multiset()] for st in graph.states]
    edges = set()
    strict_edges = set()
    drift_edges = set()
    rows, cols = np.nonzero(graph.probs)
    for i, j in zip(rows.tolist(), cols.tolist()):
        a, b = state_m[i], state_m[j]
        if a == b:
            continue
        edges.add((a, b))
        if (i, j) in graph.strict_edges:
            strict_edges.add((a, b))
        if (i, j) in graph.drift_edges:
            drift_edges.add((a, b))
    return TypeProjection(
        kind=graph.kind,
        multisets=tuple(msets),
        edges=frozenset(edges),
        strict_edges=frozenset(strict_edges),
        drift_edges=frozenset(drift_edges),
    )


def pairwise_dominance_table(
    m: PayoffMatrix,
) -> dict[tuple[StrategyType, StrategyType, Sign], Dominance]:
    """All 18 single-game dominance comparisons (type, type, sign)."""
    return {
        (x, y, s): pairwise_dominance(x, y, s, m)
        for x, y, s in itertools.product(StrategyType, StrategyType, Sign)
    }

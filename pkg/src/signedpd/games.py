"""Strategy types, tie signs, and prisoner's dilemma payoff evaluation.

Everything here is a pure function of its arguments.  The integer codes of
the enums are load-bearing: the simulation kernels and the exact chain
analyzer share them, and canonical motif ordering sorts by them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple


class StrategyType(IntEnum):
    """The three agent types.

    UD always defects, UC always cooperates, CO mirrors the tie sign:
    cooperate on a positive tie, defect on a negative one.
    """

    UD = 0
    CO = 1
    UC = 2


class Sign(IntEnum):
    """Tie sign on an edge; every existing edge carries exactly one."""

    NEGATIVE = 0
    POSITIVE = 1


class Action(IntEnum):
    DEFECT = 0
    COOPERATE = 1


class Dominance(IntEnum):
    """Outcome of comparing the two payoffs of a single dyadic game."""

    TIE = 0
    X_WINS = 1
    Y_WINS = 2


@dataclass(frozen=True)
class PayoffMatrix:
    """Strict prisoner's dilemma payoffs: T > R > P > S enforced.

    The (warn-only) 2R > T + S condition is the usual repeated-game
    efficiency check; nothing in this model relies on it.
    """

    T: float = 5.0
    R: float = 3.0
    P: float = 1.0
    S: float = 0.0

    def __post_init__(self):
        if not (self.T > self.R > self.P > self.S):
            raise ValueError(
                f"payoffs must satisfy T > R > P > S, got "
                f"T={self.T}, R={self.R}, P={self.P}, S={self.S}"
            )
        if not 2 * self.R > self.T + self.S:
            warnings.warn(
                "payoff matrix violates 2R > T + S; still a valid strict PD",
                stacklevel=2,
            )

    def payoff(self, mine: Action, theirs: Action) -> float:
        """Single-game payoff to the player choosing ``mine``."""
        if mine == Action.COOPERATE:
            return self.R if theirs == Action.COOPERATE else self.S
        return self.T if theirs == Action.COOPERATE else self.P


DEFAULT_PAYOFFS = PayoffMatrix()


class DyadOutcome(NamedTuple):
    actions: tuple[Action, Action]
    payoffs: tuple[float, float]


class TriadOutcome(NamedTuple):
    # Edge order (ab, bc, ca); each pair is (first endpoint, second endpoint).
    edge_actions: tuple[tuple[Action, Action], ...]
    payoffs: tuple[float, float, float]


def resolve_action(strategy: StrategyType, sign_to_opponent: Sign) -> Action:
    """Action an agent of ``strategy`` takes against an opponent on a tie
    of the given sign."""
    if strategy == StrategyType.UD:
        return Action.DEFECT
    if strategy == StrategyType.UC:
        return Action.COOPERATE
    return Action.COOPERATE if sign_to_opponent == Sign.POSITIVE else Action.DEFECT


def play_dyad(
    type_a: StrategyType,
    type_b: StrategyType,
    sign: Sign,
    m: PayoffMatrix = DEFAULT_PAYOFFS,
) -> DyadOutcome:
    """One prisoner's dilemma game across a single signed tie."""
    act_a = resolve_action(type_a, sign)
    act_b = resolve_action(type_b, sign)
    return DyadOutcome(
        actions=(act_a, act_b),
        payoffs=(m.payoff(act_a, act_b), m.payoff(act_b, act_a)),
    )


def play_triad(
    types: tuple[StrategyType, StrategyType, StrategyType],
    signs: tuple[Sign, Sign, Sign],
    m: PayoffMatrix = DEFAULT_PAYOFFS,
) -> TriadOutcome:
    """Three pairwise games inside a closed triangle.

    ``signs`` follows the edge order (ab, bc, ca) for participants
    (a, b, c); each participant's payoff is the sum of its two games.
    """
    a, b, c = types
    s_ab, s_bc, s_ca = signs
    ab = play_dyad(a, b, s_ab, m)
    bc = play_dyad(b, c, s_bc, m)
    ca = play_dyad(c, a, s_ca, m)
    return TriadOutcome(
        edge_actions=(ab.actions, bc.actions, ca.actions),
        payoffs=(
            ab.payoffs[0] + ca.payoffs[1],
            bc.payoffs[0] + ab.payoffs[1],
            ca.payoffs[0] + bc.payoffs[1],
        ),
    )


def pairwise_dominance(
    x: StrategyType,
    y: StrategyType,
    sign: Sign,
    m: PayoffMatrix = DEFAULT_PAYOFFS,
) -> Dominance:
    """Who earns strictly more in a single game between x and y."""
    pay_x, pay_y = play_dyad(x, y, sign, m).payoffs
    if pay_x > pay_y:
        return Dominance.X_WINS
    if pay_y > pay_x:
        return Dominance.Y_WINS
    return Dominance.TIE

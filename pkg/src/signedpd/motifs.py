"""Dyad and triad motif states and their canonical forms.

A motif state pins down everything the dynamics can see inside one
interaction unit: the participant types plus the sign of every internal
tie.  Dyads have 2 types and 1 sign; triads have 3 types and 3 signs in
the edge order (ab, bc, ca).

Because participants are interchangeable, states that differ only by a
relabeling are the same state.  Canonical form is the lexicographically
smallest (types, signs) tuple over all relabelings, where a vertex
permutation carries each sign along with its edge.  Integer codes match
the simulation kernels' successor encodings, so Monte Carlo counts and
analytic probabilities index the same way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .games import Sign, StrategyType

TYPE_NAMES = ("UD", "CO", "UC")

_DYAD_KIND = "dyad"
_TRIAD_KIND = "triad"

# Slot layout for a triad on vertices (0, 1, 2): slot 0 = edge {0,1},
# slot 1 = edge {1,2}, slot 2 = edge {2,0}.
_SLOT_OF_PAIR = {
    frozenset((0, 1)): 0,
    frozenset((1, 2)): 1,
    frozenset((2, 0)): 2,
}

_SLOT_PAIRS = ((0, 1), (1, 2), (2, 0))


def _triad_perms():
    """All vertex permutations with their induced slot permutations.

    For a permutation sigma (new vertex i was old vertex sigma[i]), the
    relabeled state reads types'[i] = types[sigma[i]] and
    signs'[slot{i,j}] = signs[slot{sigma[i], sigma[j]}].
    """
    out = []
    for sigma in itertools.permutations(range(3)):
        slot_map = tuple(
            _SLOT_OF_PAIR[frozenset((sigma[i], sigma[j]))] for i, j in _SLOT_PAIRS
        )
        out.append((sigma, slot_map))
    return tuple(out)


_TRIAD_PERMS = _triad_perms()


@dataclass(frozen=True, order=True)
class MotifState:
    """An exact dyad or triad state: participant types plus tie signs."""

    kind: str
    types: tuple[StrategyType, ...]
    signs: tuple[Sign, ...]

    def __post_init__(self):
        if self.kind not in (_DYAD_KIND, _TRIAD_KIND):
            raise ValueError(f"unknown motif kind {self.kind!r}")
        want = (2, 1) if self.kind == _DYAD_KIND else (3, 3)
        if (len(self.types), len(self.signs)) != want:
            raise ValueError(
                f"{self.kind} motif needs {want[0]} types and {want[1]} signs, "
                f"got {len(self.types)} and {len(self.signs)}"
            )
        object.__setattr__(
            self, "types", tuple(StrategyType(t) for t in self.types)
        )
        object.__setattr__(self, "signs", tuple(Sign(s) for s in self.signs))

    @classmethod
    def dyad(cls, t0, t1, sign) -> "MotifState":
        return cls(_DYAD_KIND, (t0, t1), (sign,))

    @classmethod
    def triad(cls, types, signs) -> "MotifState":
        return cls(_TRIAD_KIND, tuple(types), tuple(signs))

    @property
    def is_dyad(self) -> bool:
        return self.kind == _DYAD_KIND

    def canonical(self) -> "MotifState":
        """Lexicographically minimal relabeling of this state.

        Idempotent: the canonical form of a canonical state is itself.
        """
        if self.is_dyad:
            t0, t1 = self.types
            if t0 <= t1:
                return self
            return MotifState.dyad(t1, t0, self.signs[0])
        best = None
        for sigma, slot_map in _TRIAD_PERMS:
            cand = (
                tuple(self.types[v] for v in sigma),
                tuple(self.signs[slot_map[s]] for s in range(3)),
            )
            if best is None or cand < best:
                best = cand
        return MotifState.triad(*best)

    def is_canonical(self) -> bool:
        return self == self.canonical()

    def type_multiset(self) -> tuple[StrategyType, ...]:
        return tuple(sorted(self.types))

    def code(self) -> int:
        """Labeled integer code (see dyad_code / triad_code)."""
        if self.is_dyad:
            return dyad_code(self.types[0], self.types[1], self.signs[0])
        return triad_code(self.types, self.signs)

    def label(self) -> str:
        """Short ASCII name: ``CO+CO`` for dyads, ``UD,CO,UC|+-+`` for triads."""
        glyph = {Sign.POSITIVE: "+", Sign.NEGATIVE: "-"}
        if self.is_dyad:
            t0, t1 = self.types
            return f"{TYPE_NAMES[t0]}{glyph[self.signs[0]]}{TYPE_NAMES[t1]}"
        names = ",".join(TYPE_NAMES[t] for t in self.types)
        marks = "".join(glyph[s] for s in self.signs)
        return f"{names}|{marks}"

    def __str__(self) -> str:
        return self.label()


def dyad_code(t0, t1, sign) -> int:
    """Code in [0, 18): (t0*3 + t1)*2 + sign — the kernels' encoding."""
    return (int(t0) * 3 + int(t1)) * 2 + int(sign)


def dyad_from_code(code: int) -> MotifState:
    if not 0 <= code < 18:
        raise ValueError(f"dyad code out of range: {code}")
    sign = code % 2
    pair = code // 2
    return MotifState.dyad(pair // 3, pair % 3, sign)


def triad_code(types, signs) -> int:
    """Code in [0, 216): type base-3 digits then sign bits, kernel order."""
    t0, t1, t2 = (int(t) for t in types)
    s01, s12, s20 = (int(s) for s in signs)
    return ((t0 * 3 + t1) * 3 + t2) * 8 + s01 * 4 + s12 * 2 + s20


def triad_from_code(code: int) -> MotifState:
    if not 0 <= code < 216:
        raise ValueError(f"triad code out of range: {code}")
    sign_bits = code % 8
    trip = code // 8
    types = (trip // 9, (trip // 3) % 3, trip % 3)
    signs = ((sign_bits >> 2) & 1, (sign_bits >> 1) & 1, sign_bits & 1)
    return MotifState.triad(types, signs)


def labeled_dyad_states() -> list[MotifState]:
    """All 18 labeled dyads, in code order."""
    return [dyad_from_code(c) for c in range(18)]


def labeled_triad_states() -> list[MotifState]:
    """All 216 labeled triads, in code order."""
    return [triad_from_code(c) for c in range(216)]


def enumerate_dyad_states() -> list[MotifState]:
    """The 12 canonical dyad states (6 unordered type pairs x 2 signs)."""
    out = []
    for t0, t1 in itertools.combinations_with_replacement(StrategyType, 2):
        for s in Sign:
            out.append(MotifState.dyad(t0, t1, s))
    return sorted(out)


def enumerate_triad_states() -> list[MotifState]:
    """All canonical triad states, sorted.

    The 216 labeled states collapse under the six relabelings to 56
    canonical ones (a regression constant; the exhaustive-orbit test
    re-derives it).
    """
    return sorted({st.canonical() for st in labeled_triad_states()})

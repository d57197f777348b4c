"""Static-topology signed networks, generators, and triangle indexing.

Topology (node set, edge set) is frozen at construction; only edge signs
and node strategy types mutate afterwards.  Because topology is static the
triangle index is computed once up front and stored flat, which is what
lets triadic selection draw uniformly in O(1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .games import Sign, StrategyType
from .rng import SplitMix64


@dataclass(frozen=True)
class GraphSpec:
    """Topology generator choice: complete(n), erdos_renyi(n, p) or
    ring_lattice(n, k) with k neighbours per side."""

    kind: str
    n: int
    p: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ("complete", "erdos_renyi", "ring_lattice"):
            raise ValueError(f"unknown network kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("network needs at least 2 nodes")
        if self.kind == "erdos_renyi":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("erdos_renyi needs edge probability p in [0, 1]")
        if self.kind == "ring_lattice":
            if self.k is None or self.k < 1:
                raise ValueError("ring_lattice needs k >= 1")
            if 2 * self.k >= self.n:
                raise ValueError("ring_lattice needs 2k < n")

    @classmethod
    def parse(cls, text: str) -> "GraphSpec":
        """Parse forms like ``complete(9)`` or ``erdos_renyi(30, 0.3)``."""
        m = re.fullmatch(r"\s*(\w+)\s*\(([^)]*)\)\s*", text)
        if not m:
            raise ValueError(f"cannot parse network spec {text!r}")
        kind = m.group(1)
        args = [a.strip() for a in m.group(2).split(",") if a.strip()]
        try:
            if kind == "complete" and len(args) == 1:
                return cls("complete", int(args[0]))
            if kind == "erdos_renyi" and len(args) == 2:
                return cls("erdos_renyi", int(args[0]), p=float(args[1]))
            if kind == "ring_lattice" and len(args) == 2:
                return cls("ring_lattice", int(args[0]), k=int(args[1]))
        except ValueError as exc:
            if "network" in str(exc) or "needs" in str(exc):
                raise
            raise ValueError(f"bad arguments in network spec {text!r}") from exc
        raise ValueError(f"cannot parse network spec {text!r}")

    def __str__(self) -> str:
        if self.kind == "complete":
            return f"complete({self.n})"
        if self.kind == "erdos_renyi":
            return f"erdos_renyi({self.n}, {self.p:g})"
        return f"ring_lattice({self.n}, {self.k})"


class TriangleIndex:
    """Exhaustive, duplicate-free list of closed triangles.

    ``triples[t]`` holds node ids (a < b < c); ``edge_slots[t]`` holds the
    edge-array indices of (ab, bc, ca) so kernels can update signs without
    a lookup.
    """

    def __init__(self, triples: np.ndarray, edge_slots: np.ndarray, node_count: int):
        self.triples = triples
        self.edge_slots = edge_slots
        self._node_count = node_count

    def __len__(self) -> int:
        return len(self.triples)

    def as_tuples(self) -> list[tuple[int, int, int]]:
        return [tuple(map(int, row)) for row in self.triples]

    @property
    def coverage(self) -> float:
        """Fraction of nodes that belong to at least one triangle.

        Triadic dynamics never selects nodes outside every triangle, so
        anything below 1.0 means part of the population is frozen.
        """
        if self._node_count == 0:
            return 0.0
        covered = np.zeros(self._node_count, dtype=bool)
        if len(self.triples):
            covered[self.triples.ravel()] = True
        return float(covered.sum()) / self._node_count


class SignedNetwork:
    """Undirected network with a mutable sign per edge and a strategy type
    per node."""

    def __init__(self, node_count: int, edges: list[tuple[int, int]],
                 types: np.ndarray, signs: np.ndarray):
        if node_count < 2:
            raise ValueError("network needs at least 2 nodes")
        seen = set()
        ea = np.empty(len(edges), dtype=np.int32)
        eb = np.empty(len(edges), dtype=np.int32)
        for i, (a, b) in enumerate(edges):
            if a == b:
                raise ValueError(f"self-loop on node {a}")
            if not (0 <= a < node_count and 0 <= b < node_count):
                raise ValueError(f"edge ({a}, {b}) outside node range")
            lo, hi = (a, b) if a < b else (b, a)
            if (lo, hi) in seen:
                raise ValueError(f"duplicate edge ({lo}, {hi})")
            seen.add((lo, hi))
            ea[i], eb[i] = lo, hi
        if len(types) != node_count:
            raise ValueError("one strategy type per node required")
        if len(signs) != len(edges):
            raise ValueError("one sign per edge required")

        self.node_count = node_count
        self.edge_a = ea
        self.edge_b = eb
        self.signs = np.asarray(signs, dtype=np.int8).copy()
        self.types = np.asarray(types, dtype=np.int8).copy()
        self._edge_index = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(ea, eb))}
        self.triangles = self._build_triangle_index()

    # -- construction helpers -------------------------------------------------

    def _build_triangle_index(self) -> TriangleIndex:
        adj: list[set[int]] = [set() for _ in range(self.node_count)]
        for a, b in zip(self.edge_a, self.edge_b):
            adj[a].add(int(b))
            adj[b].add(int(a))
        triples = []
        slots = []
        for e, (a, b) in enumerate(zip(self.edge_a, self.edge_b)):
            a, b = int(a), int(b)
            for c in sorted(adj[a] & adj[b]):
                if c > b:  # a < b < c guarantees each triangle counted once
                    triples.append((a, b, c))
                    slots.append((
                        e,
                        self._edge_index[(b, c)],
                        self._edge_index[(a, c)],
                    ))
        return TriangleIndex(
            np.array(triples, dtype=np.int32).reshape(-1, 3),
            np.array(slots, dtype=np.int32).reshape(-1, 3),
            self.node_count,
        )

    # -- edge/node access -----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edge_a)

    def edge_id(self, a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        try:
            return self._edge_index[key]
        except KeyError:
            raise KeyError(f"no edge between {a} and {b}") from None

    def has_edge(self, a: int, b: int) -> bool:
        key = (a, b) if a < b else (b, a)
        return key in self._edge_index

    def get_sign(self, a: int, b: int) -> Sign:
        return Sign(int(self.signs[self.edge_id(a, b)]))

    def set_sign(self, a: int, b: int, sign: Sign) -> None:
        self.signs[self.edge_id(a, b)] = int(sign)

    def get_type(self, node: int) -> StrategyType:
        return StrategyType(int(self.types[node]))

    def set_type(self, node: int, t: StrategyType) -> None:
        self.types[node] = int(t)

    def set_all_types(self, t: StrategyType) -> None:
        self.types[:] = int(t)

    def edges(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(self.edge_a, self.edge_b)]

    # -- run statistics ---------------------------------------------------------

    def type_counts(self) -> dict[str, int]:
        return {
            t.name: int(np.count_nonzero(self.types == int(t)))
            for t in StrategyType
        }

    def positive_fraction(self) -> float:
        if self.edge_count == 0:
            return 0.0
        return float(self.signs.sum()) / self.edge_count

    def mutual_cooperation_fraction(self) -> float:
        """Fraction of edges whose two endpoints would both cooperate given
        the current signs; the cooperation metric reported everywhere."""
        if self.edge_count == 0:
            return 0.0
        ta = self.types[self.edge_a]
        tb = self.types[self.edge_b]
        # cooperates <=> UC, or CO on a positive tie
        coop_a = (ta == StrategyType.UC) | ((ta == StrategyType.CO) & (self.signs == 1))
        coop_b = (tb == StrategyType.UC) | ((tb == StrategyType.CO) & (self.signs == 1))
        return float(np.count_nonzero(coop_a & coop_b)) / self.edge_count


def enumerate_triangles(network: SignedNetwork) -> TriangleIndex:
    """The triangle index built at construction (topology never changes)."""
    return network.triangles


def _generate_edges(spec: GraphSpec, rng: SplitMix64) -> list[tuple[int, int]]:
    n = spec.n
    if spec.kind == "complete":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if spec.kind == "erdos_renyi":
        return [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.next_double() < spec.p
        ]
    edges = []
    for i in range(n):
        for d in range(1, spec.k + 1):
            j = (i + d) % n
            edges.append((i, j) if i < j else (j, i))
    edges.sort()
    return edges


def build_network(
    spec: GraphSpec | str,
    q_pos: float = 0.5,
    seed: int = 0,
) -> SignedNetwork:
    """Generate a signed network with an equal mix of strategy types.

    Draw order is fixed (topology, then the type shuffle, then edge signs)
    so a seed pins the whole construction.  Types are dealt round-robin in
    enum order over a shuffled node order, making counts differ by at most
    one; each edge starts positive independently with probability q_pos.
    """
    if isinstance(spec, str):
        spec = GraphSpec.parse(spec)
    if not 0.0 <= q_pos <= 1.0:
        raise ValueError("q_pos must lie in [0, 1]")

    rng = SplitMix64(seed)
    edges = _generate_edges(spec, rng)

    n = spec.n
    order = list(range(n))
    for i in range(n - 1, 0, -1):  # Fisher-Yates
        j = rng.next_below(i + 1)
        order[i], order[j] = order[j], order[i]
    types = np.empty(n, dtype=np.int8)
    for slot, node in enumerate(order):
        types[node] = slot % 3

    signs = np.empty(len(edges), dtype=np.int8)
    for i in range(len(edges)):
        signs[i] = 1 if rng.next_double() < q_pos else 0

    return SignedNetwork(n, edges, types, signs)


__all__ = [
    "GraphSpec",
    "SignedNetwork",
    "TriangleIndex",
    "build_network",
    "enumerate_triangles",
]

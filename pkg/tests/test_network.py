import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from signedpd.games import Sign, StrategyType
from signedpd.network import (
    GraphSpec,
    SignedNetwork,
    build_network,
    enumerate_triangles,
)


def brute_force_triangles(n, edges):
    """O(n^3) reference: every unordered triple whose three edges all exist."""
    have = set()
    for a, b in edges:
        have.add((min(a, b), max(a, b)))
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if ((a, b) in have and (b, c) in have and (a, c) in have):
                    out.append((a, b, c))
    return out


# ---------------------------------------------------------------- GraphSpec


def test_parse_round_trip():
    for text in ("complete(9)", "erdos_renyi(30, 0.3)", "ring_lattice(30, 3)"):
        spec = GraphSpec.parse(text)
        assert str(spec) == text
        assert GraphSpec.parse(str(spec)) == spec


@pytest.mark.parametrize("bad", [
    "pentagon(5)", "complete()", "complete(1)", "erdos_renyi(10)",
    "erdos_renyi(10, 1.5)", "ring_lattice(10, 5)", "ring_lattice(10, 0)",
    "complete(three)", "complete(3",
])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        GraphSpec.parse(bad)


# ----------------------------------------------------------------- builders


def test_complete3_all_positive():
    net = build_network("complete(3)", q_pos=1.0, seed=0)
    assert net.edge_count == 3
    assert all(net.get_sign(a, b) == Sign.POSITIVE for a, b in net.edges())
    assert len(net.triangles) == 1


def test_er_p1_is_complete():
    net = build_network("erdos_renyi(30, 1.0)", seed=5)
    assert net.edge_count == 435  # C(30, 2)


def test_equal_mix_counts():
    net = build_network("complete(9)", seed=3)
    counts = net.type_counts()
    assert counts == {"UD": 3, "CO": 3, "UC": 3}


def test_mix_counts_differ_by_at_most_one():
    for n in (10, 11, 12, 30):
        net = build_network(f"complete({n})", seed=n)
        counts = list(net.type_counts().values())
        assert max(counts) - min(counts) <= 1
        assert sum(counts) == n


def test_q_pos_zero_all_negative():
    net = build_network("complete(3)", q_pos=0.0, seed=9)
    for a, b in net.edges():
        assert net.get_sign(a, b) == Sign.NEGATIVE


def test_build_deterministic_in_seed():
    a = build_network("erdos_renyi(25, 0.4)", q_pos=0.3, seed=11)
    b = build_network("erdos_renyi(25, 0.4)", q_pos=0.3, seed=11)
    assert a.edges() == b.edges()
    assert np.array_equal(a.types, b.types)
    assert np.array_equal(a.signs, b.signs)
    c = build_network("erdos_renyi(25, 0.4)", q_pos=0.3, seed=12)
    assert a.edges() != c.edges() or not np.array_equal(a.types, c.types)


def test_ring_lattice_degree():
    net = build_network("ring_lattice(30, 3)", seed=0)
    deg = np.zeros(30, dtype=int)
    for a, b in net.edges():
        deg[a] += 1
        deg[b] += 1
    assert (deg == 6).all()
    assert net.edge_count == 90


# ---------------------------------------------------------------- triangles


def test_4cycle_has_no_triangles():
    types = np.zeros(4, dtype=np.int8)
    signs = np.zeros(4, dtype=np.int8)
    net = SignedNetwork(4, [(0, 1), (1, 2), (2, 3), (0, 3)], types, signs)
    assert len(net.triangles) == 0
    assert net.triangles.coverage == 0.0


def test_complete4_has_4_triangles():
    net = build_network("complete(4)", seed=0)
    assert len(net.triangles) == 4
    assert net.triangles.as_tuples() == [
        (0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


@pytest.mark.parametrize("seed", range(6))
def test_triangle_index_matches_brute_force(seed):
    net = build_network("erdos_renyi(20, 0.3)", seed=seed)
    want = brute_force_triangles(20, net.edges())
    assert sorted(net.triangles.as_tuples()) == want


def test_triangle_edge_slots_consistent():
    net = build_network("erdos_renyi(15, 0.5)", seed=2)
    for (a, b, c), slots in zip(net.triangles.triples, net.triangles.edge_slots):
        a, b, c = int(a), int(b), int(c)
        assert slots[0] == net.edge_id(a, b)
        assert slots[1] == net.edge_id(b, c)
        assert slots[2] == net.edge_id(c, a)


def test_coverage_partial():
    # path 0-1-2 plus triangle 3-4-5: half the nodes sit in a triangle
    edges = [(0, 1), (1, 2), (3, 4), (4, 5), (3, 5)]
    net = SignedNetwork(6, edges, np.zeros(6, dtype=np.int8),
                        np.zeros(5, dtype=np.int8))
    assert len(net.triangles) == 1
    assert net.triangles.coverage == pytest.approx(0.5)
    assert enumerate_triangles(net) is net.triangles


# ------------------------------------------------------- SignedNetwork API


def test_sign_get_set_symmetric():
    net = build_network("complete(3)", q_pos=1.0, seed=0)
    net.set_sign(0, 1, Sign.NEGATIVE)
    assert net.get_sign(1, 0) == Sign.NEGATIVE
    assert net.get_sign(0, 1) == Sign.NEGATIVE


def test_get_sign_missing_edge_raises():
    net = SignedNetwork(3, [(0, 1)], np.zeros(3, dtype=np.int8),
                        np.zeros(1, dtype=np.int8))
    with pytest.raises(KeyError):
        net.get_sign(1, 2)
    assert net.has_edge(0, 1) and not net.has_edge(0, 2)


@pytest.mark.parametrize("edges,err", [
    ([(0, 0)], "self-loop"),
    ([(0, 1), (1, 0)], "duplicate"),
    ([(0, 5)], "outside"),
])
def test_invalid_edges_rejected(edges, err):
    with pytest.raises(ValueError, match=err):
        SignedNetwork(3, edges, np.zeros(3, dtype=np.int8),
                      np.zeros(len(edges), dtype=np.int8))


def test_mutual_cooperation_fraction():
    # UC-UC edge cooperates regardless of sign; CO joins only on positive
    types = np.array([StrategyType.UC, StrategyType.UC, StrategyType.CO],
                     dtype=np.int8)
    signs = np.array([0, 1, 0], dtype=np.int8)  # edges (01, 12, 20)
    net = SignedNetwork(3, [(0, 1), (1, 2), (0, 2)], types, signs)
    assert net.mutual_cooperation_fraction() == pytest.approx(2 / 3)
    assert net.positive_fraction() == pytest.approx(1 / 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6),
       st.floats(min_value=0.0, max_value=1.0))
def test_er_signs_match_q_pos_direction(seed, q_pos):
    net = build_network("erdos_renyi(12, 0.6)", q_pos=q_pos, seed=seed)
    if net.edge_count == 0:
        return
    frac = net.positive_fraction()
    if q_pos == 0.0:
        assert frac == 0.0
    if q_pos == 1.0:
        assert frac == 1.0
    assert 0.0 <= frac <= 1.0

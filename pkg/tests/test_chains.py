"""Exact transition chains over canonical dyad/triad states, absorption
solves, and the dominance/robustness reports built on top of them.
"""

import itertools

import numpy as np
import pytest

from signedpd.chains import (
    InvasionOutcome,
    absorbing_states,
    absorption_probabilities,
    build_dyad_chain,
    build_triad_chain,
    dominance_matrix,
    mutant_robustness,
    pairwise_dominance_table,
    project_types,
    step_distribution,
)
from signedpd.dynamics import Mode, ModelParams
from signedpd.games import Dominance, Sign, StrategyType
from signedpd.motifs import (
    MotifState,
    labeled_dyad_states,
    labeled_triad_states,
)

UD, CO, UC = StrategyType.UD, StrategyType.CO, StrategyType.UC
NEG, POS = Sign.NEGATIVE, Sign.POSITIVE

DEFAULTS = ModelParams()
TRIADIC_DEFAULTS = ModelParams(mode=Mode.TRIADIC)


def dyad(t0, t1, s):
    return MotifState.dyad(t0, t1, s)


def triad(types, signs):
    return MotifState.triad(types, signs)


# ------------------------------------------------------------- chain shape


def test_dyad_chain_stochastic():
    g = build_dyad_chain(DEFAULTS)
    assert len(g.states) == 12
    assert (g.probs >= 0).all()
    np.testing.assert_allclose(g.probs.sum(axis=1), 1.0, atol=1e-12)


def test_triad_chain_stochastic():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    assert len(g.states) == 56
    assert (g.probs >= 0).all()
    np.testing.assert_allclose(g.probs.sum(axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("p_pos,p_neg,p_inv", [
    (0.5, 0.5, 1.0), (0.25, 0.25, 0.5), (0.7, 0.1, 0.01), (0.0, 1.0, 1.0),
])
def test_chains_stochastic_across_params(p_pos, p_neg, p_inv):
    params = ModelParams(p_pos=p_pos, p_neg=p_neg, p_inv=p_inv)
    for g in (build_dyad_chain(params), build_triad_chain(params)):
        np.testing.assert_allclose(g.probs.sum(axis=1), 1.0, atol=1e-12)
        assert (g.probs >= 0).all()


# --------------------------------------------------------- exact successors


def test_mutual_defection_forces_negative():
    g = build_dyad_chain(DEFAULTS)
    succ = g.successors(dyad(UD, UD, POS))
    assert succ == [(dyad(UD, UD, NEG), 1.0)]


def test_mutual_cooperation_forces_positive():
    g = build_dyad_chain(DEFAULTS)
    succ = g.successors(dyad(UC, UC, NEG))
    assert succ == [(dyad(UC, UC, POS), 1.0)]


def test_canonicalization_commutes_with_dynamics():
    """Stepping a labeled state and then canonicalizing must equal stepping
    its canonical representative: exhaustive over all 216 labeled triads."""
    for st in labeled_triad_states():
        dist = step_distribution(st, TRIADIC_DEFAULTS)
        canon_dist = {}
        for nxt, p in dist.items():
            key = nxt.canonical()
            canon_dist[key] = canon_dist.get(key, 0.0) + p
        ref = {}
        for nxt, p in step_distribution(st.canonical(), TRIADIC_DEFAULTS).items():
            key = nxt.canonical()
            ref[key] = ref.get(key, 0.0) + p
        assert set(canon_dist) == set(ref)
        for k in ref:
            assert canon_dist[k] == pytest.approx(ref[k], abs=1e-12)


def test_step_distribution_sums_to_one():
    for st in labeled_dyad_states():
        total = sum(step_distribution(st, DEFAULTS).values())
        assert total == pytest.approx(1.0, abs=1e-12)


# ------------------------------------------------------------- absorbing sets


def test_dyad_absorbing_set():
    g = build_dyad_chain(DEFAULTS)
    got = set(absorbing_states(g))
    assert got == {
        dyad(UC, UC, POS),
        dyad(CO, CO, POS),
        dyad(CO, CO, NEG),
        dyad(UD, UD, NEG),
    }


def test_triad_absorbing_states_are_homogeneous():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    byclass = {}
    for st in absorbing_states(g):
        types = set(st.types)
        assert len(types) == 1
        t = types.pop()
        byclass.setdefault(t, []).append(st)
    # every all-CO sign class survives; UD only all-negative; UC all-positive
    assert len(byclass[CO]) == 4
    assert [s.signs for s in byclass[UD]] == [(NEG, NEG, NEG)]
    assert [s.signs for s in byclass[UC]] == [(POS, POS, POS)]


def test_all_ud_reaches_all_negative_certainly():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    starts = [triad((UD, UD, UD), s)
              for s in itertools.product(Sign, repeat=3)]
    rows = absorption_probabilities(g, starts)
    target = triad((UD, UD, UD), (NEG, NEG, NEG))
    for st in starts:
        assert rows[st.canonical()] == {target: pytest.approx(1.0)}


def test_all_uc_reaches_all_positive_certainly():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    starts = [triad((UC, UC, UC), s)
              for s in itertools.product(Sign, repeat=3)]
    rows = absorption_probabilities(g, starts)
    target = triad((UC, UC, UC), (POS, POS, POS))
    for st in starts:
        assert rows[st.canonical()] == {target: pytest.approx(1.0)}


def test_homogeneity_trapping_exhaustive():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    for st in g.states:
        if len(set(st.types)) != 1:
            continue
        for nxt, p in g.successors(st):
            assert p > 0
            assert nxt.type_multiset() == st.type_multiset()


# ------------------------------------------------------------- absorption


def test_co_ud_negative_dyad_drifts_half():
    g = build_dyad_chain(DEFAULTS)
    rows = absorption_probabilities(g, [dyad(CO, UD, NEG)])
    row = rows[dyad(CO, UD, NEG).canonical()]
    assert row[dyad(CO, CO, NEG)] == pytest.approx(0.5)
    assert row[dyad(UD, UD, NEG)] == pytest.approx(0.5)
    assert sum(row.values()) == pytest.approx(1.0)


def test_absorption_from_absorbing_state_is_itself():
    g = build_dyad_chain(DEFAULTS)
    rows = absorption_probabilities(g, [dyad(UD, UD, NEG)])
    assert rows[dyad(UD, UD, NEG)] == {dyad(UD, UD, NEG): 1.0}


def test_absorption_rows_are_distributions():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    rows = absorption_probabilities(g, list(g.states))
    for row in rows.values():
        assert sum(row.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(0.0 <= p <= 1.0 + 1e-12 for p in row.values())


def test_ud_uc_dyad_absorbs_to_ud():
    g = build_dyad_chain(DEFAULTS)
    rows = absorption_probabilities(g, [dyad(UD, UC, POS)])
    row = rows[dyad(UD, UC, POS).canonical()]
    assert row == {dyad(UD, UD, NEG): pytest.approx(1.0)}


# ---------------------------------------------------------------- dominance


def test_dominance_diagonal_coexists():
    dom = dominance_matrix(TRIADIC_DEFAULTS)
    for t in StrategyType:
        assert dom.outcome(t, t) == InvasionOutcome.COEXISTS
        entry = dom.entries[(t, t)]
        for p in entry.invader_absorption.values():
            assert p == pytest.approx(1.0)


def test_ud_invader_dominates_uc_resident():
    # the exact chain sends (UD, UC, UC) to all-UD from every sign start;
    # reported as-is for comparison with the intuition that no homogeneous
    # triad should dominate another (see the analysis notes)
    dom = dominance_matrix(TRIADIC_DEFAULTS)
    assert dom.outcome(UD, UC) == InvasionOutcome.DOMINATES
    assert dom.outcome(UC, UD) == InvasionOutcome.REPELLED


def test_ud_vs_co_coexists():
    dom = dominance_matrix(TRIADIC_DEFAULTS)
    assert dom.outcome(UD, CO) == InvasionOutcome.COEXISTS
    assert dom.outcome(CO, UD) == InvasionOutcome.COEXISTS


def test_dominance_probabilities_bounded():
    dom = dominance_matrix(TRIADIC_DEFAULTS)
    for entry in dom.entries.values():
        for d in (entry.invader_absorption, entry.resident_absorption):
            assert len(d) == 8  # every labeled sign start
            for p in d.values():
                assert -1e-12 <= p <= 1.0 + 1e-12


# --------------------------------------------------------------- robustness


def test_resident_uc_mutant_ud_exits():
    rep = mutant_robustness(UC, Mode.DYADIC, DEFAULTS)
    assert rep.can_exit(UD)
    # UD wins strictly: takeover survives removing drift transitions
    assert not rep.drift_only(UD)


def test_resident_ud_mutant_uc_never_exits():
    rep = mutant_robustness(UD, Mode.DYADIC, DEFAULTS)
    assert not rep.can_exit(UC)
    for e in rep.entries:
        if e.mutant == UC:
            assert e.takeover_probability == pytest.approx(0.0)


def test_resident_ud_mutant_co_drift_only():
    rep = mutant_robustness(UD, Mode.DYADIC, DEFAULTS)
    assert rep.can_exit(CO)
    assert rep.drift_only(CO)
    by_sign = {e.initial_signs: e for e in rep.entries if e.mutant == CO}
    # from a negative tie both sides defect and tie on payoff: a fair coin
    assert by_sign[(NEG,)].takeover_probability == pytest.approx(0.5)
    assert by_sign[(NEG,)].takeover_without_drift == pytest.approx(0.0)


def test_robustness_triadic_mode_runs():
    rep = mutant_robustness(CO, Mode.TRIADIC, TRIADIC_DEFAULTS)
    assert rep.mode == Mode.TRIADIC
    muts = {e.mutant for e in rep.entries}
    assert muts == {UD, UC}
    assert len(rep.entries) == 16  # 2 mutants x 8 sign starts


# --------------------------------------------------------------- projection


def test_projection_has_ten_multisets():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    proj = project_types(g)
    assert len(proj.multisets) == 10


def test_projection_homogeneous_closed():
    g = build_triad_chain(TRIADIC_DEFAULTS)
    proj = project_types(g)
    closed = proj.closed_multisets()
    for t in StrategyType:
        assert (t, t, t) in closed
    assert proj.outgoing((UD, UD, UD)) == []


def test_projection_uc_uc_ud_reaches_uc_ud_ud():
    # UD out-earns two UCs (2T beats R+S), so one UC gets replaced:
    # multisets are kept sorted in enum order, UD < CO < UC
    g = build_triad_chain(TRIADIC_DEFAULTS)
    proj = project_types(g)
    assert (UD, UD, UC) in proj.outgoing((UD, UC, UC))


def test_projection_strict_drift_edges_subset():
    proj = project_types(build_triad_chain(TRIADIC_DEFAULTS))
    assert proj.strict_edges <= proj.edges
    assert proj.drift_edges <= proj.edges
    assert proj.edges <= proj.strict_edges | proj.drift_edges


# ----------------------------------------------------- dominance table (2x)


def test_pairwise_table_complete_and_correct():
    table = pairwise_dominance_table(DEFAULTS.payoffs)
    assert len(table) == 18
    assert table[(UD, UC, POS)] == Dominance.X_WINS
    assert table[(UD, UC, NEG)] == Dominance.X_WINS
    assert table[(UD, CO, POS)] == Dominance.X_WINS
    assert table[(UD, CO, NEG)] == Dominance.TIE
    assert table[(UC, CO, POS)] == Dominance.TIE
    assert table[(CO, UC, NEG)] == Dominance.X_WINS
    for t in StrategyType:
        for s in Sign:
            assert table[(t, t, s)] == Dominance.TIE


# ------------------------------------------------------------ drift variant


def test_drift_free_chain_still_stochastic():
    g = build_triad_chain(TRIADIC_DEFAULTS, drift_invasions=False)
    np.testing.assert_allclose(g.probs.sum(axis=1), 1.0, atol=1e-12)
    assert not g.drift_edges


def test_drift_free_chain_has_more_absorbing_states():
    full = build_triad_chain(TRIADIC_DEFAULTS)
    strict = build_triad_chain(TRIADIC_DEFAULTS, drift_invasions=False)
    # removing drift can only remove transitions, never add them
    assert set(absorbing_states(full)) <= set(absorbing_states(strict))
    assert len(absorbing_states(strict)) > len(absorbing_states(full))

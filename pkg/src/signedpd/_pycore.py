"""Pure-Python simulation kernel.

This module defines the micro-step semantics; the compiled kernel in
``_fastcore.pyx`` is a line-for-line C translation and must stay draw-for-
draw identical so seeds replay the same trajectory on either backend.

One micro-step:

1. select a unit uniformly: ``next_below(E)`` over edges (dyadic) or
   ``next_below(T)`` over triangles (triadic);
2. play the game(s) with actions resolved from current signs, total the
   payoffs;
3. rewrite each played edge's sign from its action pair, in edge-slot order
   (ab, bc, ca for triads): both-cooperate forces positive, both-defect
   forces negative, a mixed pair consumes one double u and turns positive
   if u < p_pos, negative if u < p_pos + p_neg, else keeps the sign;
4. one double decides whether an invasion event happens (u < p_inv); on an
   event the invader is drawn from the maximal-payoff participants (one
   ``next_below`` only when tied), the target from the remaining
   participants (one ``next_below`` only when more than one remains), and
   the target's type is overwritten.

``next_below(k)`` is never called for k == 1 (unit selection included);
draws that carry no information are skipped, which keeps single-unit
networks stream-aligned with the motif samplers below.
"""

from __future__ import annotations

from .rng import SplitMix64

DYADIC = 0
TRIADIC = 1


def _act(t: int, s: int) -> int:
    # UD=0 always defects, UC=2 always cooperates, CO=1 mirrors the sign
    # (sign and action codes coincide: 1 = positive = cooperate).
    if t == 0:
        return 0
    if t == 2:
        return 1
    return s


def _step_dyadic(types, signs, edge_a, edge_b, pay, p_pos, p_neg, p_inv, rng):
    n_edges = len(edge_a)
    e = rng.next_below(n_edges) if n_edges > 1 else 0
    a = edge_a[e]
    b = edge_b[e]
    s = signs[e]
    act_a = _act(types[a], s)
    act_b = _act(types[b], s)
    pay_a = pay[act_a][act_b]
    pay_b = pay[act_b][act_a]
    if act_a == act_b:
        signs[e] = act_a
    else:
        u = rng.next_double()
        if u < p_pos:
            signs[e] = 1
        elif u < p_pos + p_neg:
            signs[e] = 0
    u = rng.next_double()
    if u < p_inv:
        if pay_a > pay_b:
            types[b] = types[a]
        elif pay_b > pay_a:
            types[a] = types[b]
        elif rng.next_below(2) == 0:
            types[b] = types[a]
        else:
            types[a] = types[b]


def _step_triadic(types, signs, tri_flat, tre_flat, n_tri, pay,
                  p_pos, p_neg, p_inv, rng):
    t = rng.next_below(n_tri) if n_tri > 1 else 0
    base = 3 * t
    i = tri_flat[base]
    j = tri_flat[base + 1]
    k = tri_flat[base + 2]
    e0 = tre_flat[base]      # edge (i, j)
    e1 = tre_flat[base + 1]  # edge (j, k)
    e2 = tre_flat[base + 2]  # edge (k, i)
    ti = types[i]
    tj = types[j]
    tk = types[k]
    s0 = signs[e0]
    s1 = signs[e1]
    s2 = signs[e2]
    a_ij = _act(ti, s0)
    a_ji = _act(tj, s0)
    a_jk = _act(tj, s1)
    a_kj = _act(tk, s1)
    a_ki = _act(tk, s2)
    a_ik = _act(ti, s2)
    pay_i = pay[a_ij][a_ji] + pay[a_ik][a_ki]
    pay_j = pay[a_ji][a_ij] + pay[a_jk][a_kj]
    pay_k = pay[a_kj][a_jk] + pay[a_ki][a_ik]
    for e, x, y in ((e0, a_ij, a_ji), (e1, a_jk, a_kj), (e2, a_ki, a_ik)):
        if x == y:
            signs[e] = x
        else:
            u = rng.next_double()
            if u < p_pos:
                signs[e] = 1
            elif u < p_pos + p_neg:
                signs[e] = 0
    u = rng.next_double()
    if u < p_inv:
        pmax = pay_i
        if pay_j > pmax:
            pmax = pay_j
        if pay_k > pmax:
            pmax = pay_k
        maximal = []
        if pay_i == pmax:
            maximal.append(0)
        if pay_j == pmax:
            maximal.append(1)
        if pay_k == pmax:
            maximal.append(2)
        if len(maximal) == 1:
            inv = maximal[0]
        else:
            inv = maximal[rng.next_below(len(maximal))]
        others = [p for p in (0, 1, 2) if p != inv]
        tgt = others[rng.next_below(2)]
        nodes = (i, j, k)
        types[nodes[tgt]] = types[nodes[inv]]


def _absorbing_dyadic(types, signs, edge_a, edge_b, p_pos, p_neg, p_inv):
    for e in range(len(edge_a)):
        a = edge_a[e]
        b = edge_b[e]
        s = signs[e]
        act_a = _act(types[a], s)
        act_b = _act(types[b], s)
        if act_a == act_b:
            if act_a != s:
                return False  # unanimous actions force the opposite sign
        else:
            if (s == 1 and p_neg > 0.0) or (s == 0 and p_pos > 0.0):
                return False
        if p_inv > 0.0 and types[a] != types[b]:
            # whichever side earns at least as much can copy its type over
            return False
    return True


def _absorbing_triadic(types, signs, tri_flat, tre_flat, n_tri, pay,
                       p_pos, p_neg, p_inv):
    for t in range(n_tri):
        base = 3 * t
        i = tri_flat[base]
        j = tri_flat[base + 1]
        k = tri_flat[base + 2]
        e0 = tre_flat[base]
        e1 = tre_flat[base + 1]
        e2 = tre_flat[base + 2]
        ti = types[i]
        tj = types[j]
        tk = types[k]
        s0 = signs[e0]
        s1 = signs[e1]
        s2 = signs[e2]
        a_ij = _act(ti, s0)
        a_ji = _act(tj, s0)
        a_jk = _act(tj, s1)
        a_kj = _act(tk, s1)
        a_ki = _act(tk, s2)
        a_ik = _act(ti, s2)
        for s, x, y in ((s0, a_ij, a_ji), (s1, a_jk, a_kj), (s2, a_ki, a_ik)):
            if x == y:
                if x != s:
                    return False
            else:
                if (s == 1 and p_neg > 0.0) or (s == 0 and p_pos > 0.0):
                    return False
        if p_inv > 0.0:
            pay_i = pay[a_ij][a_ji] + pay[a_ik][a_ki]
            pay_j = pay[a_ji][a_ij] + pay[a_jk][a_kj]
            pay_k = pay[a_kj][a_jk] + pay[a_ki][a_ik]
            pmax = max(pay_i, pay_j, pay_k)
            trio = (ti, tj, tk)
            pays = (pay_i, pay_j, pay_k)
            for x in range(3):
                if pays[x] == pmax:
                    for y in range(3):
                        if y != x and trio[x] != trio[y]:
                            return False
    return True


def _record(samples, step, types, signs, edge_a, edge_b, n_nodes, n_edges):
    c_ud = 0
    c_co = 0
    for t in types:
        if t == 0:
            c_ud += 1
        elif t == 1:
            c_co += 1
    c_uc = n_nodes - c_ud - c_co
    n_pos = 0
    n_coop = 0
    for e in range(n_edges):
        s = signs[e]
        if s == 1:
            n_pos += 1
        if _act(types[edge_a[e]], s) == 1 and _act(types[edge_b[e]], s) == 1:
            n_coop += 1
    if n_edges:
        frac_pos = n_pos / n_edges
        frac_coop = n_coop / n_edges
    else:
        frac_pos = 0.0
        frac_coop = 0.0
    samples.append((step, c_ud / n_nodes, c_co / n_nodes, c_uc / n_nodes,
                    frac_pos, frac_coop))


def step_once(types, signs, edge_a, edge_b, tri, tri_edges, mode,
              T, R, P, S, p_pos, p_neg, p_inv, rng_state):
    """One micro-step in place on the numpy state arrays; returns the
    advanced rng state."""
    rng = SplitMix64(rng_state)
    pay = ((P, T), (S, R))
    if mode == DYADIC:
        _step_dyadic(types, signs, edge_a, edge_b, pay,
                     p_pos, p_neg, p_inv, rng)
    else:
        _step_triadic(types, signs, tri.ravel(), tri_edges.ravel(), len(tri),
                      pay, p_pos, p_neg, p_inv, rng)
    return rng.state


def check_absorbing(types, signs, edge_a, edge_b, tri, tri_edges, mode,
                    T, R, P, S, p_pos, p_neg, p_inv):
    """True iff no selectable unit can change any sign or type with
    positive probability."""
    pay = ((P, T), (S, R))
    if mode == DYADIC:
        return _absorbing_dyadic(types, signs, edge_a, edge_b,
                                 p_pos, p_neg, p_inv)
    return _absorbing_triadic(types, signs, tri.ravel(), tri_edges.ravel(),
                              len(tri), pay, p_pos, p_neg, p_inv)


def run_sim(types, signs, edge_a, edge_b, tri, tri_edges, mode,
            T, R, P, S, p_pos, p_neg, p_inv,
            max_steps, check_interval, sample_interval, rng_state):
    """Iterate micro-steps until absorbed or max_steps.

    Mutates ``types`` and ``signs`` in place.  Returns
    (steps_taken, absorbed, samples, rng_state) where samples rows are
    (step, frac_UD, frac_CO, frac_UC, frac_pos_edges, frac_mutual_coop).
    The absorbing check also runs once before stepping, so an absorbed
    initial state returns steps_taken=0.
    """
    n_nodes = len(types)
    n_edges = len(edge_a)
    ty = types.tolist()
    sg = signs.tolist()
    ea = edge_a.tolist()
    eb = edge_b.tolist()
    tri_flat = tri.ravel().tolist()
    tre_flat = tri_edges.ravel().tolist()
    n_tri = len(tri)
    pay = ((P, T), (S, R))
    rng = SplitMix64(rng_state)

    def absorbed_now():
        if mode == DYADIC:
            return _absorbing_dyadic(ty, sg, ea, eb, p_pos, p_neg, p_inv)
        return _absorbing_triadic(ty, sg, tri_flat, tre_flat, n_tri, pay,
                                  p_pos, p_neg, p_inv)

    samples = []
    _record(samples, 0, ty, sg, ea, eb, n_nodes, n_edges)
    absorbed = absorbed_now()
    steps = 0
    while not absorbed and steps < max_steps:
        if mode == DYADIC:
            _step_dyadic(ty, sg, ea, eb, pay, p_pos, p_neg, p_inv, rng)
        else:
            _step_triadic(ty, sg, tri_flat, tre_flat, n_tri, pay,
                          p_pos, p_neg, p_inv, rng)
        steps += 1
        if steps % sample_interval == 0:
            _record(samples, steps, ty, sg, ea, eb, n_nodes, n_edges)
        if steps % check_interval == 0:
            absorbed = absorbed_now()
    if samples[-1][0] != steps:
        _record(samples, steps, ty, sg, ea, eb, n_nodes, n_edges)

    types[:] = ty
    signs[:] = sg
    return steps, absorbed, samples, rng.state


def sample_dyad_steps(t0, t1, s, T, R, P, S, p_pos, p_neg, p_inv, n, seed):
    """Monte Carlo successor counts for one dyad state.

    Resets the two-node state, runs one micro-step, and tallies the
    successor code ((t0*3 + t1)*2 + sign), n times.
    """
    counts = [0] * 18
    pay = ((P, T), (S, R))
    edge_a = [0]
    edge_b = [1]
    rng = SplitMix64(seed)
    for _ in range(n):
        types = [t0, t1]
        signs = [s]
        _step_dyadic(types, signs, edge_a, edge_b, pay,
                     p_pos, p_neg, p_inv, rng)
        counts[(types[0] * 3 + types[1]) * 2 + signs[0]] += 1
    return counts


def sample_triad_steps(t0, t1, t2, s01, s12, s20,
                       T, R, P, S, p_pos, p_neg, p_inv, n, seed):
    """Monte Carlo successor counts for one triad state.

    Successor code: ((t0*3 + t1)*3 + t2)*8 + s01*4 + s12*2 + s20.
    """
    counts = [0] * 216
    pay = ((P, T), (S, R))
    tri_flat = [0, 1, 2]
    tre_flat = [0, 1, 2]  # edge slots: (01, 12, 20)
    rng = SplitMix64(seed)
    for _ in range(n):
        types = [t0, t1, t2]
        signs = [s01, s12, s20]
        _step_triadic(types, signs, tri_flat, tre_flat, 1, pay,
                      p_pos, p_neg, p_inv, rng)
        code = ((types[0] * 3 + types[1]) * 3 + types[2]) * 8 \
            + signs[0] * 4 + signs[1] * 2 + signs[2]
        counts[code] += 1
    return counts

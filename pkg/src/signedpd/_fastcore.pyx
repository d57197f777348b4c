# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

C translation of ``_pycore``; the two must stay draw-for-draw identical
(same splitmix64 stream, same conditional draw skipping), which the
backend-equality tests enforce.  See ``_pycore`` for the step semantics.
"""

from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

cdef uint64_t _WEYL = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t _MIX1 = <uint64_t>0xBF58476D1CE4E5B9
cdef uint64_t _MIX2 = <uint64_t>0x94D049BB133111EB
cdef double _INV53 = 1.0 / 9007199254740992.0  # 2**-53

DYADIC = 0
TRIADIC = 1


cdef inline uint64_t _next_u64(uint64_t* s) nogil:
    cdef uint64_t z
    s[0] = s[0] + _WEYL
    z = s[0]
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline double _next_double(uint64_t* s) nogil:
    return <double>(_next_u64(s) >> 11) * _INV53


cdef inline uint64_t _next_below(uint64_t* s, uint64_t n) nogil:
    cdef uint64_t reject = (<uint64_t>0 - n) % n
    cdef uint64_t x
    while True:
        x = _next_u64(s)
        if x >= reject:
            return x % n


cdef inline int _act(int t, int s) nogil:
    if t == 0:      # UD
        return 0
    if t == 2:      # UC
        return 1
    return s        # CO mirrors the sign


cdef void _step_dyadic_c(int8_t[::1] types, int8_t[::1] signs,
                         int32_t[::1] edge_a, int32_t[::1] edge_b,
                         double* pay, double p_pos, double p_neg,
                         double p_inv, uint64_t* rs) nogil:
    cdef int n_edges = edge_a.shape[0]
    cdef int e = 0
    cdef int a, b, s, act_a, act_b
    cdef double pay_a, pay_b, u
    if n_edges > 1:
        e = <int>_next_below(rs, <uint64_t>n_edges)
    a = edge_a[e]
    b = edge_b[e]
    s = signs[e]
    act_a = _act(types[a], s)
    act_b = _act(types[b], s)
    pay_a = pay[act_a * 2 + act_b]
    pay_b = pay[act_b * 2 + act_a]
    if act_a == act_b:
        signs[e] = <int8_t>act_a
    else:
        u = _next_double(rs)
        if u < p_pos:
            signs[e] = 1
        elif u < p_pos + p_neg:
            signs[e] = 0
    u = _next_double(rs)
    if u < p_inv:
        if pay_a > pay_b:
            types[b] = types[a]
        elif pay_b > pay_a:
            types[a] = types[b]
        elif _next_below(rs, 2) == 0:
            types[b] = types[a]
        else:
            types[a] = types[b]


cdef void _step_triadic_c(int8_t[::1] types, int8_t[::1] signs,
                          int32_t[:, ::1] tri, int32_t[:, ::1] tri_edges,
                          double* pay, double p_pos, double p_neg,
                          double p_inv, uint64_t* rs) nogil:
    cdef int n_tri = tri.shape[0]
    cdef int t = 0
    cdef int i, j, k, e0, e1, e2, ti, tj, tk, s0, s1, s2
    cdef int a_ij, a_ji, a_jk, a_kj, a_ki, a_ik
    cdef double pay_i, pay_j, pay_k, pmax, u
    cdef int slot, e, x, y
    cdef int maxidx[3]
    cdef int others[2]
    cdef int nmax, no, inv, tgt, p
    cdef int nodes[3]
    if n_tri > 1:
        t = <int>_next_below(rs, <uint64_t>n_tri)
    i = tri[t, 0]
    j = tri[t, 1]
    k = tri[t, 2]
    e0 = tri_edges[t, 0]
    e1 = tri_edges[t, 1]
    e2 = tri_edges[t, 2]
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
    pay_i = pay[a_ij * 2 + a_ji] + pay[a_ik * 2 + a_ki]
    pay_j = pay[a_ji * 2 + a_ij] + pay[a_jk * 2 + a_kj]
    pay_k = pay[a_kj * 2 + a_jk] + pay[a_ki * 2 + a_ik]
    for slot in range(3):
        if slot == 0:
            e = e0; x = a_ij; y = a_ji
        elif slot == 1:
            e = e1; x = a_jk; y = a_kj
        else:
            e = e2; x = a_ki; y = a_ik
        if x == y:
            signs[e] = <int8_t>x
        else:
            u = _next_double(rs)
            if u < p_pos:
                signs[e] = 1
            elif u < p_pos + p_neg:
                signs[e] = 0
    u = _next_double(rs)
    if u < p_inv:
        pmax = pay_i
        if pay_j > pmax:
            pmax = pay_j
        if pay_k > pmax:
            pmax = pay_k
        nmax = 0
        if pay_i == pmax:
            maxidx[nmax] = 0; nmax += 1
        if pay_j == pmax:
            maxidx[nmax] = 1; nmax += 1
        if pay_k == pmax:
            maxidx[nmax] = 2; nmax += 1
        if nmax == 1:
            inv = maxidx[0]
        else:
            inv = maxidx[<int>_next_below(rs, <uint64_t>nmax)]
        no = 0
        for p in range(3):
            if p != inv:
                others[no] = p; no += 1
        tgt = others[<int>_next_below(rs, 2)]
        nodes[0] = i; nodes[1] = j; nodes[2] = k
        types[nodes[tgt]] = types[nodes[inv]]


cdef bint _absorbing_dyadic_c(int8_t[::1] types, int8_t[::1] signs,
                              int32_t[::1] edge_a, int32_t[::1] edge_b,
                              double p_pos, double p_neg, double p_inv) nogil:
    cdef int e, a, b, s, act_a, act_b
    for e in range(edge_a.shape[0]):
        a = edge_a[e]
        b = edge_b[e]
        s = signs[e]
        act_a = _act(types[a], s)
        act_b = _act(types[b], s)
        if act_a == act_b:
            if act_a != s:
                return False
        else:
            if (s == 1 and p_neg > 0.0) or (s == 0 and p_pos > 0.0):
                return False
        if p_inv > 0.0 and types[a] != types[b]:
            return False
    return True


cdef bint _absorbing_triadic_c(int8_t[::1] types, int8_t[::1] signs,
                               int32_t[:, ::1] tri, int32_t[:, ::1] tri_edges,
                               double* pay, double p_pos, double p_neg,
                               double p_inv) nogil:
    cdef int t, i, j, k, e0, e1, e2, ti, tj, tk, s0, s1, s2
    cdef int a_ij, a_ji, a_jk, a_kj, a_ki, a_ik
    cdef int slot, s, x, y, xi, yi
    cdef double pay_i, pay_j, pay_k, pmax
    cdef int trio[3]
    cdef double pays[3]
    for t in range(tri.shape[0]):
        i = tri[t, 0]
        j = tri[t, 1]
        k = tri[t, 2]
        e0 = tri_edges[t, 0]
        e1 = tri_edges[t, 1]
        e2 = tri_edges[t, 2]
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
        for slot in range(3):
            if slot == 0:
                s = s0; x = a_ij; y = a_ji
            elif slot == 1:
                s = s1; x = a_jk; y = a_kj
            else:
                s = s2; x = a_ki; y = a_ik
            if x == y:
                if x != s:
                    return False
            else:
                if (s == 1 and p_neg > 0.0) or (s == 0 and p_pos > 0.0):
                    return False
        if p_inv > 0.0:
            pay_i = pay[a_ij * 2 + a_ji] + pay[a_ik * 2 + a_ki]
            pay_j = pay[a_ji * 2 + a_ij] + pay[a_jk * 2 + a_kj]
            pay_k = pay[a_kj * 2 + a_jk] + pay[a_ki * 2 + a_ik]
            pmax = pay_i
            if pay_j > pmax:
                pmax = pay_j
            if pay_k > pmax:
                pmax = pay_k
            trio[0] = ti; trio[1] = tj; trio[2] = tk
            pays[0] = pay_i; pays[1] = pay_j; pays[2] = pay_k
            for xi in range(3):
                if pays[xi] == pmax:
                    for yi in range(3):
                        if yi != xi and trio[xi] != trio[yi]:
                            return False
    return True


cdef tuple _record_c(int64_t step, int8_t[::1] types, int8_t[::1] signs,
                     int32_t[::1] edge_a, int32_t[::1] edge_b):
    cdef int n_nodes = types.shape[0]
    cdef int n_edges = edge_a.shape[0]
    cdef int c_ud = 0, c_co = 0, c_uc, n_pos = 0, n_coop = 0
    cdef int idx, s
    for idx in range(n_nodes):
        if types[idx] == 0:
            c_ud += 1
        elif types[idx] == 1:
            c_co += 1
    c_uc = n_nodes - c_ud - c_co
    for idx in range(n_edges):
        s = signs[idx]
        if s == 1:
            n_pos += 1
        if _act(types[edge_a[idx]], s) == 1 and _act(types[edge_b[idx]], s) == 1:
            n_coop += 1
    cdef double frac_pos = 0.0, frac_coop = 0.0
    if n_edges:
        frac_pos = (<double>n_pos) / n_edges
        frac_coop = (<double>n_coop) / n_edges
    return (step, (<double>c_ud) / n_nodes, (<double>c_co) / n_nodes,
            (<double>c_uc) / n_nodes, frac_pos, frac_coop)


def step_once(types, signs, edge_a, edge_b, tri, tri_edges, int mode,
              double T, double R, double P, double S,
              double p_pos, double p_neg, double p_inv, rng_state):
    """One micro-step in place; returns the advanced rng state."""
    cdef uint64_t rs = <uint64_t>rng_state
    cdef double pay[4]
    pay[0] = P; pay[1] = T; pay[2] = S; pay[3] = R
    cdef int8_t[::1] ty = types
    cdef int8_t[::1] sg = signs
    cdef int32_t[::1] ea = edge_a
    cdef int32_t[::1] eb = edge_b
    cdef int32_t[:, ::1] tr = tri
    cdef int32_t[:, ::1] te = tri_edges
    if mode == 0:
        _step_dyadic_c(ty, sg, ea, eb, pay, p_pos, p_neg, p_inv, &rs)
    else:
        _step_triadic_c(ty, sg, tr, te, pay, p_pos, p_neg, p_inv, &rs)
    return rs


def check_absorbing(types, signs, edge_a, edge_b, tri, tri_edges, int mode,
                    double T, double R, double P, double S,
                    double p_pos, double p_neg, double p_inv):
    cdef double pay[4]
    pay[0] = P; pay[1] = T; pay[2] = S; pay[3] = R
    cdef int8_t[::1] ty = types
    cdef int8_t[::1] sg = signs
    cdef int32_t[::1] ea = edge_a
    cdef int32_t[::1] eb = edge_b
    cdef int32_t[:, ::1] tr = tri
    cdef int32_t[:, ::1] te = tri_edges
    if mode == 0:
        return bool(_absorbing_dyadic_c(ty, sg, ea, eb, p_pos, p_neg, p_inv))
    return bool(_absorbing_triadic_c(ty, sg, tr, te, pay, p_pos, p_neg, p_inv))


def run_sim(types, signs, edge_a, edge_b, tri, tri_edges, int mode,
            double T, double R, double P, double S,
            double p_pos, double p_neg, double p_inv,
            int64_t max_steps, int64_t check_interval, int64_t sample_interval,
            rng_state):
    """Iterate micro-steps until absorbed or max_steps; mirrors
    ``_pycore.run_sim`` exactly."""
    cdef uint64_t rs = <uint64_t>rng_state
    cdef double pay[4]
    pay[0] = P; pay[1] = T; pay[2] = S; pay[3] = R
    cdef int8_t[::1] ty = types
    cdef int8_t[::1] sg = signs
    cdef int32_t[::1] ea = edge_a
    cdef int32_t[::1] eb = edge_b
    cdef int32_t[:, ::1] tr = tri
    cdef int32_t[:, ::1] te = tri_edges
    cdef int64_t steps = 0
    cdef int64_t last_recorded = 0
    cdef bint absorbed

    samples = [_record_c(0, ty, sg, ea, eb)]
    if mode == 0:
        absorbed = _absorbing_dyadic_c(ty, sg, ea, eb, p_pos, p_neg, p_inv)
    else:
        absorbed = _absorbing_triadic_c(ty, sg, tr, te, pay,
                                        p_pos, p_neg, p_inv)
    while not absorbed and steps < max_steps:
        if mode == 0:
            _step_dyadic_c(ty, sg, ea, eb, pay, p_pos, p_neg, p_inv, &rs)
        else:
            _step_triadic_c(ty, sg, tr, te, pay, p_pos, p_neg, p_inv, &rs)
        steps += 1
        if steps % sample_interval == 0:
            samples.append(_record_c(steps, ty, sg, ea, eb))
            last_recorded = steps
        if steps % check_interval == 0:
            if mode == 0:
                absorbed = _absorbing_dyadic_c(ty, sg, ea, eb,
                                               p_pos, p_neg, p_inv)
            else:
                absorbed = _absorbing_triadic_c(ty, sg, tr, te, pay,
                                                p_pos, p_neg, p_inv)
    if last_recorded != steps:
        samples.append(_record_c(steps, ty, sg, ea, eb))
    return steps, bool(absorbed), samples, rs


def sample_dyad_steps(int t0, int t1, int s,
                      double T, double R, double P, double S,
                      double p_pos, double p_neg, double p_inv,
                      int64_t n, seed):
    """Monte Carlo successor counts for one dyad state (code
    (t0*3 + t1)*2 + sign)."""
    cdef uint64_t rs = <uint64_t>seed
    cdef double pay[4]
    pay[0] = P; pay[1] = T; pay[2] = S; pay[3] = R
    cdef int64_t counts[18]
    cdef int8_t types_buf[2]
    cdef int8_t signs_buf[1]
    cdef int32_t ea_buf[1]
    cdef int32_t eb_buf[1]
    cdef int8_t[::1] ty = types_buf
    cdef int8_t[::1] sg = signs_buf
    cdef int32_t[::1] ea = ea_buf
    cdef int32_t[::1] eb = eb_buf
    cdef int64_t rep
    cdef int idx
    for idx in range(18):
        counts[idx] = 0
    ea[0] = 0
    eb[0] = 1
    with nogil:
        for rep in range(n):
            ty[0] = <int8_t>t0
            ty[1] = <int8_t>t1
            sg[0] = <int8_t>s
            _step_dyadic_c(ty, sg, ea, eb, pay, p_pos, p_neg, p_inv, &rs)
            counts[(ty[0] * 3 + ty[1]) * 2 + sg[0]] += 1
    return [counts[idx] for idx in range(18)]


def sample_triad_steps(int t0, int t1, int t2, int s01, int s12, int s20,
                       double T, double R, double P, double S,
                       double p_pos, double p_neg, double p_inv,
                       int64_t n, seed):
    """Monte Carlo successor counts for one triad state (code
    ((t0*3 + t1)*3 + t2)*8 + s01*4 + s12*2 + s20)."""
    cdef uint64_t rs = <uint64_t>seed
    cdef double pay[4]
    pay[0] = P; pay[1] = T; pay[2] = S; pay[3] = R
    cdef int64_t counts[216]
    cdef int8_t types_buf[3]
    cdef int8_t signs_buf[3]
    cdef int32_t tri_buf[3]
    cdef int32_t tre_buf[3]
    cdef int8_t[::1] ty = types_buf
    cdef int8_t[::1] sg = signs_buf
    cdef int32_t[:, ::1] tr
    cdef int32_t[:, ::1] te
    cdef int64_t rep
    cdef int idx, code
    for idx in range(216):
        counts[idx] = 0
    tri_buf[0] = 0; tri_buf[1] = 1; tri_buf[2] = 2
    tre_buf[0] = 0; tre_buf[1] = 1; tre_buf[2] = 2
    tr = <int32_t[:1, :3]>&tri_buf[0]
    te = <int32_t[:1, :3]>&tre_buf[0]
    with nogil:
        for rep in range(n):
            ty[0] = <int8_t>t0
            ty[1] = <int8_t>t1
            ty[2] = <int8_t>t2
            sg[0] = <int8_t>s01
            sg[1] = <int8_t>s12
            sg[2] = <int8_t>s20
            _step_triadic_c(ty, sg, tr, te, pay, p_pos, p_neg, p_inv, &rs)
            code = ((ty[0] * 3 + ty[1]) * 3 + ty[2]) * 8 \
                + sg[0] * 4 + sg[1] * 2 + sg[2]
            counts[code] += 1
    return [counts[idx] for idx in range(216)]


def rng_u64_sequence(seed, int n):
    """First n raw generator outputs; lets tests pin C/Python RNG parity."""
    cdef uint64_t rs = <uint64_t>seed
    cdef int i
    out = []
    for i in range(n):
        out.append(_next_u64(&rs))
    return out

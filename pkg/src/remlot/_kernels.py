"""JIT-compiled integer kernels for decoding and neighborhood scans.

Everything here is nogil so callers can run kernels concurrently from
plain threads.  Costs are int64 cents; INFEASIBLE is an absorbing
sentinel that compares greater than any finite cost.
"""

import numpy as np
from numba import njit

INFEASIBLE = 1 << 62

_warmed = False


def warm_up():
    """Force JIT compilation / cache loading of the solver kernels.

    Budgeted solves call this before starting their clock so compiler
    latency never counts against the search time.
    """
    global _warmed
    if _warmed:
        return
    sm = np.array([[True, False]])
    sr = np.array([[False, False]])
    dem = np.array([[1, 1]], dtype=np.int64)
    ret = np.zeros((1, 2), dtype=np.int64)
    unit = np.ones(1, dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    rows = np.zeros((1, 2), dtype=np.int64)
    product_costs(0, 1, sm, sr, dem, ret, unit, unit, unit, unit, unit, unit,
                  costs)
    decode_all(sm, sr, dem, ret, unit, unit, unit, unit, unit, unit,
               rows.copy(), rows.copy(), rows.copy(), rows.copy(), costs)
    out = (np.zeros(1, np.int64), np.zeros(1, np.int64),
           np.zeros(1, np.bool_), np.zeros(1, np.bool_),
           np.zeros(1, np.int64), np.zeros(1, np.bool_),
           np.zeros(1, np.bool_))
    scan_products(0, 1, sm, sr, dem, ret, unit, unit, unit, unit, unit, unit,
                  1, *out)
    apply_scan(0, 1, *out, sm.copy(), sr.copy())
    _warmed = True


@njit(nogil=True, cache=True)
def row_cost(sm, sr, dem, ret, k_m, k_r, h_m, h_r, p_m, p_r):
    """Total cost of one product's setup rows, INFEASIBLE if demand is uncovered.

    Production periods are the set bits of either row; each covers demand
    up to the next production period.  Remanufacturing is used first,
    bounded by recoverables on hand (returns usable from their own period).
    """
    T = dem.shape[0]
    cost = 0
    y_r = 0
    t = 0
    while t < T and not (sm[t] or sr[t]):
        if dem[t] > 0:
            return INFEASIBLE
        y_r += ret[t]
        cost += h_r * y_r
        t += 1
    y_m = 0
    while t < T:
        u = t
        v = u + 1
        while v < T and not (sm[v] or sr[v]):
            v += 1
        seg = 0
        for tau in range(u, v):
            seg += dem[tau]
        avail = y_r + ret[u]
        x_r = 0
        if sr[u]:
            x_r = seg if seg < avail else avail
        rem = seg - x_r
        x_m = 0
        if rem > 0:
            if not sm[u]:
                return INFEASIBLE
            x_m = rem
        if x_r > 0:
            cost += k_r
        if x_m > 0:
            cost += k_m
        cost += p_r * x_r + p_m * x_m
        for tau in range(u, v):
            if tau == u:
                y_m += x_m + x_r
                y_r += ret[tau] - x_r
            else:
                y_r += ret[tau]
            y_m -= dem[tau]
            cost += h_m * y_m + h_r * y_r
        t = v
    return cost


@njit(nogil=True, cache=True)
def row_decode(sm, sr, dem, ret, k_m, k_r, h_m, h_r, p_m, p_r,
               x_m, x_r, y_m, y_r):
    """Like row_cost but also fills quantity/inventory rows.

    Rows are zeroed on infeasibility.  Kept separate from row_cost so the
    neighbor scan does not pay for the writes; tests pin the two to agree.
    """
    T = dem.shape[0]
    for t in range(T):
        x_m[t] = 0
        x_r[t] = 0
        y_m[t] = 0
        y_r[t] = 0
    cost = 0
    rec = 0
    t = 0
    while t < T and not (sm[t] or sr[t]):
        if dem[t] > 0:
            for i in range(T):
                y_r[i] = 0
            return INFEASIBLE
        rec += ret[t]
        y_r[t] = rec
        cost += h_r * rec
        t += 1
    srv = 0
    while t < T:
        u = t
        v = u + 1
        while v < T and not (sm[v] or sr[v]):
            v += 1
        seg = 0
        for tau in range(u, v):
            seg += dem[tau]
        avail = rec + ret[u]
        take = 0
        if sr[u]:
            take = seg if seg < avail else avail
        rem = seg - take
        make = 0
        if rem > 0:
            if not sm[u]:
                for i in range(T):
                    x_m[i] = 0
                    x_r[i] = 0
                    y_m[i] = 0
                    y_r[i] = 0
                return INFEASIBLE
            make = rem
        x_r[u] = take
        x_m[u] = make
        if take > 0:
            cost += k_r
        if make > 0:
            cost += k_m
        cost += p_r * take + p_m * make
        for tau in range(u, v):
            if tau == u:
                srv += make + take
                rec += ret[tau] - take
            else:
                rec += ret[tau]
            srv -= dem[tau]
            y_m[tau] = srv
            y_r[tau] = rec
            cost += h_m * srv + h_r * rec
        t = v
    return cost


@njit(nogil=True, cache=True)
def product_costs(lo, hi, sm, sr, dem, ret, k_m, k_r, h_m, h_r, p_m, p_r, out):
    for k in range(lo, hi):
        out[k] = row_cost(sm[k], sr[k], dem[k], ret[k],
                          k_m[k], k_r[k], h_m[k], h_r[k], p_m[k], p_r[k])


@njit(nogil=True, cache=True)
def decode_all(sm, sr, dem, ret, k_m, k_r, h_m, h_r, p_m, p_r,
               x_m, x_r, y_m, y_r, out):
    K = sm.shape[0]
    for k in range(K):
        out[k] = row_decode(sm[k], sr[k], dem[k], ret[k],
                            k_m[k], k_r[k], h_m[k], h_r[k], p_m[k], p_r[k],
                            x_m[k], x_r[k], y_m[k], y_r[k])


@njit(nogil=True, cache=True)
def list_moves(nbh, sm, sr, mp0, mm0, mr0, mp1, mm1, mr1):
    """Enumerate one product's moves for neighborhood ``nbh`` into buffers.

    Buffers hold new bit values for both rows at each affected period;
    mp1 is -1 for single-period moves.  Order is fixed: ascending period,
    manufacturing row before remanufacturing row, left shift before right.
    Returns the move count (at most 2*(T-1) and never above 2*T).
    """
    T = sm.shape[0]
    n = 0
    if nbh == 1:
        for t in range(T):
            mp0[n] = t
            mm0[n] = not sm[t]
            mr0[n] = sr[t]
            mp1[n] = -1
            n += 1
    elif nbh == 2:
        for t in range(T):
            mp0[n] = t
            mm0[n] = sm[t]
            mr0[n] = not sr[t]
            mp1[n] = -1
            n += 1
    elif nbh == 3:
        for t in range(T):
            if sm[t]:
                if t > 0 and not sm[t - 1]:
                    mp0[n] = t
                    mm0[n] = False
                    mr0[n] = sr[t]
                    mp1[n] = t - 1
                    mm1[n] = True
                    mr1[n] = sr[t - 1]
                    n += 1
                if t + 1 < T and not sm[t + 1]:
                    mp0[n] = t
                    mm0[n] = False
                    mr0[n] = sr[t]
                    mp1[n] = t + 1
                    mm1[n] = True
                    mr1[n] = sr[t + 1]
                    n += 1
        for t in range(T):
            if sr[t]:
                if t > 0 and not sr[t - 1]:
                    mp0[n] = t
                    mm0[n] = sm[t]
                    mr0[n] = False
                    mp1[n] = t - 1
                    mm1[n] = sm[t - 1]
                    mr1[n] = True
                    n += 1
                if t + 1 < T and not sr[t + 1]:
                    mp0[n] = t
                    mm0[n] = sm[t]
                    mr0[n] = False
                    mp1[n] = t + 1
                    mm1[n] = sm[t + 1]
                    mr1[n] = True
                    n += 1
    elif nbh == 4:
        for t in range(T):
            if sm[t] != sr[t]:
                mp0[n] = t
                mm0[n] = sr[t]
                mr0[n] = sm[t]
                mp1[n] = -1
                n += 1
    return n


@njit(nogil=True, cache=True)
def scan_products(lo, hi, sm, sr, dem, ret, k_m, k_r, h_m, h_r, p_m, p_r, nbh,
                  out_dec, out_p0, out_m0, out_r0, out_p1, out_m1, out_r1):
    """Best strictly-improving move per product in [lo, hi), one neighborhood.

    out_dec[k] is the cost decrease (0 if no improving move); the remaining
    arrays carry the winning move's affected periods and new bit values.
    Ties go to the earliest enumerated move.
    """
    T = sm.shape[1]
    cap = 2 * T
    mp0 = np.empty(cap, np.int64)
    mp1 = np.empty(cap, np.int64)
    mm0 = np.empty(cap, np.bool_)
    mr0 = np.empty(cap, np.bool_)
    mm1 = np.empty(cap, np.bool_)
    mr1 = np.empty(cap, np.bool_)
    srow = np.empty(T, np.bool_)
    rrow = np.empty(T, np.bool_)
    for k in range(lo, hi):
        for t in range(T):
            srow[t] = sm[k, t]
            rrow[t] = sr[k, t]
        base = row_cost(srow, rrow, dem[k], ret[k],
                        k_m[k], k_r[k], h_m[k], h_r[k], p_m[k], p_r[k])
        out_dec[k] = 0
        out_p0[k] = -1
        out_p1[k] = -1
        if base == INFEASIBLE:
            continue
        n = list_moves(nbh, srow, rrow, mp0, mm0, mr0, mp1, mm1, mr1)
        best = base
        best_i = -1
        for i in range(n):
            t0 = mp0[i]
            o_m0 = srow[t0]
            o_r0 = rrow[t0]
            srow[t0] = mm0[i]
            rrow[t0] = mr0[i]
            t1 = mp1[i]
            o_m1 = False
            o_r1 = False
            if t1 >= 0:
                o_m1 = srow[t1]
                o_r1 = rrow[t1]
                srow[t1] = mm1[i]
                rrow[t1] = mr1[i]
            c = row_cost(srow, rrow, dem[k], ret[k],
                         k_m[k], k_r[k], h_m[k], h_r[k], p_m[k], p_r[k])
            srow[t0] = o_m0
            rrow[t0] = o_r0
            if t1 >= 0:
                srow[t1] = o_m1
                rrow[t1] = o_r1
            if c < best:
                best = c
                best_i = i
        if best_i >= 0:
            out_dec[k] = base - best
            out_p0[k] = mp0[best_i]
            out_m0[k] = mm0[best_i]
            out_r0[k] = mr0[best_i]
            out_p1[k] = mp1[best_i]
            out_m1[k] = mm1[best_i]
            out_r1[k] = mr1[best_i]


@njit(nogil=True, cache=True)
def apply_scan(lo, hi, out_dec, out_p0, out_m0, out_r0, out_p1, out_m1, out_r1,
               sm, sr):
    """Write the winning moves of a scan into the setup rows; returns the
    summed decrease."""
    diff = 0
    for k in range(lo, hi):
        if out_dec[k] > 0:
            t0 = out_p0[k]
            sm[k, t0] = out_m0[k]
            sr[k, t0] = out_r0[k]
            t1 = out_p1[k]
            if t1 >= 0:
                sm[k, t1] = out_m1[k]
                sr[k, t1] = out_r1[k]
            diff += out_dec[k]
    return diff


@njit(nogil=True, cache=True)
def oracle_product(dem, ret, k_m, k_r, h_m, h_r, p_m, p_r):
    """Exhaustive minimum over all 2^(2T) setup patterns of one product.

    Returns (best cost, m bitmask, r bitmask); bit t encodes period t.
    Ties go to the lowest (m, r) mask pair.
    """
    T = dem.shape[0]
    sm = np.empty(T, np.bool_)
    sr = np.empty(T, np.bool_)
    best = INFEASIBLE
    best_m = 0
    best_r = 0
    for mask_m in range(1 << T):
        for t in range(T):
            sm[t] = (mask_m >> t) & 1
        for mask_r in range(1 << T):
            for t in range(T):
                sr[t] = (mask_r >> t) & 1
            c = row_cost(sm, sr, dem, ret, k_m, k_r, h_m, h_r, p_m, p_r)
            if c < best:
                best = c
                best_m = mask_m
                best_r = mask_r
    return best, best_m, best_r

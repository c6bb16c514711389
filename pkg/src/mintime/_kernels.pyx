# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot loops: Gauss-Seidel sweep and active-list pass.

Both kernels replay the arithmetic of the pure-Python update exactly (same
operation order, no FP contraction), so results are bit-identical to the
fallback.  They apply only to control-aligned dynamics, driven by tables of
per-control speeds, stencil offsets, and barycentric weights.
"""

from libc.math cimport INFINITY

from libc.stdint cimport int8_t, int32_t, uint8_t


cdef struct Best:
    double value
    int k


cdef inline void _node_best(
    double[:, ::1] values, int n,
    double[:, :, ::1] speed,
    int8_t[:, ::1] off_i, int8_t[:, ::1] off_j, double[:, ::1] weights,
    int32_t[::1] allowed_idx, int n_allowed,
    int i, int j, double dx, double eps_speed, double sentinel,
    Best* out,
) noexcept nogil:
    cdef double best = INFINITY
    cdef int best_k = -1
    cdef int t, k, v, ii, jj
    cdef double s, w, val, acc, cand
    cdef bint usable, informative
    for t in range(n_allowed):
        k = allowed_idx[t]
        s = speed[i, j, k]
        if s <= eps_speed:
            continue
        usable = True
        informative = False
        acc = 0.0
        for v in range(3):
            w = weights[k, v]
            if w > 0.0:
                ii = i + off_i[k, v]
                jj = j + off_j[k, v]
                if ii < 0 or ii >= n or jj < 0 or jj >= n:
                    usable = False
                    break
                val = values[ii, jj]
                if val < sentinel:
                    informative = True
                acc = acc + w * val
        if not usable:
            continue
        if not informative:
            acc = sentinel
        cand = acc + dx / s
        if cand < best:
            best = cand
            best_k = k
    out.value = best
    out.k = best_k


def sweep(
    double[:, ::1] values, int32_t[:, ::1] astar, uint8_t[:, ::1] is_target,
    double[:, :, ::1] speed,
    int8_t[:, ::1] off_i, int8_t[:, ::1] off_j, double[:, ::1] weights,
    int32_t[::1] allowed_idx,
    int sx, int sy, double dx, double eps_speed, double sentinel,
):
    """One Gauss-Seidel pass; returns (max_change, node_updates)."""
    cdef int n = values.shape[0]
    cdef int i, j, i0, i_end, i_step, j0, j_end, j_step
    cdef int n_allowed = allowed_idx.shape[0]
    cdef long updates = 0
    cdef double max_change = 0.0, old, change
    cdef Best best
    if sy > 0:
        j0 = 0; j_end = n; j_step = 1
    else:
        j0 = n - 1; j_end = -1; j_step = -1
    if sx > 0:
        i0 = 0; i_end = n; i_step = 1
    else:
        i0 = n - 1; i_end = -1; i_step = -1
    with nogil:
        j = j0
        while j != j_end:
            i = i0
            while i != i_end:
                if not is_target[i, j]:
                    _node_best(values, n, speed, off_i, off_j, weights,
                               allowed_idx, n_allowed, i, j, dx, eps_speed, sentinel, &best)
                    updates += 1
                    old = values[i, j]
                    if best.value < old:
                        values[i, j] = best.value
                        astar[i, j] = best.k
                        change = old - best.value
                        if change > max_change:
                            max_change = change
                i += i_step
            j += j_step
    return max_change, updates


def fim_pass(
    double[:, ::1] values, int32_t[:, ::1] astar, uint8_t[:, ::1] is_target,
    double[:, :, ::1] speed,
    int8_t[:, ::1] off_i, int8_t[:, ::1] off_j, double[:, ::1] weights,
    int32_t[::1] allowed_idx,
    int32_t[::1] cur_i, int32_t[::1] cur_j, int n_cur,
    int32_t[::1] nxt_i, int32_t[::1] nxt_j,
    int32_t[::1] act_i, int32_t[::1] act_j,
    uint8_t[:, ::1] active, int32_t[:, ::1] ins_count,
    double dx, double eps, double eps_speed, double sentinel,
):
    """One active-list pass over the snapshot (cur_i, cur_j)[:n_cur].

    Writes the next list into (nxt_i, nxt_j): stayers in snapshot order, then
    activations in event order.  Returns (n_next, n_activations, node_updates).
    """
    cdef int n = values.shape[0]
    cdef int n_allowed = allowed_idx.shape[0]
    cdef int idx, i, j, di, dj, ii, jj
    cdef int n_next = 0, n_act = 0
    cdef long updates = 0
    cdef double old, newv
    cdef Best best
    with nogil:
        for idx in range(n_cur):
            i = cur_i[idx]
            j = cur_j[idx]
            old = values[i, j]
            _node_best(values, n, speed, off_i, off_j, weights,
                       allowed_idx, n_allowed, i, j, dx, eps_speed, sentinel, &best)
            updates += 1
            newv = old
            if best.value < old:
                newv = best.value
                values[i, j] = newv
                astar[i, j] = best.k
            if old - newv <= eps:
                active[i, j] = 0
                for di in range(-1, 2):
                    for dj in range(-1, 2):
                        if di == 0 and dj == 0:
                            continue
                        ii = i + di
                        jj = j + dj
                        if ii < 0 or ii >= n or jj < 0 or jj >= n:
                            continue
                        if active[ii, jj] or is_target[ii, jj]:
                            continue
                        _node_best(values, n, speed, off_i, off_j, weights,
                                   allowed_idx, n_allowed, ii, jj, dx, eps_speed, sentinel, &best)
                        updates += 1
                        if best.value < values[ii, jj] - eps:
                            values[ii, jj] = best.value
                            astar[ii, jj] = best.k
                            active[ii, jj] = 1
                            ins_count[ii, jj] += 1
                            act_i[n_act] = ii
                            act_j[n_act] = jj
                            n_act += 1
            else:
                nxt_i[n_next] = i
                nxt_j[n_next] = j
                n_next += 1
        for idx in range(n_act):
            nxt_i[n_next] = act_i[idx]
            nxt_j[n_next] = act_j[idx]
            n_next += 1
    return n_next, n_act, updates

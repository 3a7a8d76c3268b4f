"""Compiled inner loop for the low-index subgroup search.

Same search as the reference implementation in :mod:`grpkit.low_index`
(branch on first empty slot, relator-rotation deduction, first-in-class
pruning), restructured as an iterative DFS over flat int32 arrays so numba
can compile it.  Results are bit-identical to the reference engine; tests
compare the two directly.
"""

import numpy as np
from numba import njit

# relabel_walk outcomes
_SMALLER, _EQUAL, _LARGER, _UNDECIDED = 0, 1, 2, 3

# search statuses
STATUS_OK = 0
STATUS_BUDGET = 1
STATUS_OVERFLOW = 2


@njit(cache=True)
def _relabel_walk(tab, n, ncols, beta, nu, stamp, gen, order):
    # ``nu[i]`` is only valid when ``stamp[i] == gen``: callers bump ``gen``
    # instead of clearing, saving an O(n) reset per walk.
    nu[beta] = 0
    stamp[beta] = gen
    order[0] = beta
    count = 1
    for k in range(n):
        if k >= count:
            return _UNDECIDED
        row = order[k] * ncols
        orig = k * ncols
        for c in range(ncols):
            e = tab[row + c]
            if e == -1:
                return _UNDECIDED
            o = tab[orig + c]
            if o == -1:
                return _UNDECIDED
            if stamp[e] == gen:
                v = nu[e]
            else:
                v = count
                nu[e] = v
                stamp[e] = gen
                order[count] = e
                count += 1
            if v < o:
                return _SMALLER
            if v > o:
                return _LARGER
    return _EQUAL


@njit(cache=True)
def _scan(tab, ncols, rot_f, rot_b, lo, hi, alpha, trail, trail_len, ded, ded_len):
    """Returns (ok, trail_len, ded_len); ok == 0 means contradiction."""
    f = alpha
    i = lo
    b = alpha
    j = hi - 1
    while True:
        while i <= j:
            t = tab[f * ncols + rot_f[i]]
            if t == -1:
                break
            f = t
            i += 1
        if i > j:
            if f == b:
                return 1, trail_len, ded_len
            return 0, trail_len, ded_len
        while j >= i:
            t = tab[b * ncols + rot_b[j]]
            if t == -1:
                break
            b = t
            j -= 1
        if j < i:
            if f == b:
                return 1, trail_len, ded_len
            return 0, trail_len, ded_len
        if j == i:
            c = rot_f[i]
            p1 = f * ncols + c
            p2 = b * ncols + (c ^ 1)
            tab[p1] = b
            tab[p2] = f
            trail[trail_len] = p1
            trail[trail_len + 1] = p2
            trail_len += 2
            ded[2 * ded_len] = f
            ded[2 * ded_len + 1] = c
            ded_len += 1
            return 1, trail_len, ded_len
        return 1, trail_len, ded_len


@njit(cache=True)
def _propagate(tab, ncols, rot_f, rot_b, rot_ptr, col_ptr, col_ids, trail, trail_len, ded, ded_len):
    while ded_len > 0:
        ded_len -= 1
        gamma = ded[2 * ded_len]
        c = ded[2 * ded_len + 1]
        delta = tab[gamma * ncols + c]
        for t in range(col_ptr[c], col_ptr[c + 1]):
            r = col_ids[t]
            ok, trail_len, ded_len = _scan(
                tab, ncols, rot_f, rot_b, rot_ptr[r], rot_ptr[r + 1],
                gamma, trail, trail_len, ded, ded_len,
            )
            if ok == 0:
                return 0, trail_len
        ic = c ^ 1
        for t in range(col_ptr[ic], col_ptr[ic + 1]):
            r = col_ids[t]
            ok, trail_len, ded_len = _scan(
                tab, ncols, rot_f, rot_b, rot_ptr[r], rot_ptr[r + 1],
                delta, trail, trail_len, ded, ded_len,
            )
            if ok == 0:
                return 0, trail_len
    return 1, trail_len


@njit(cache=True)
def _search(ncols, from_index, to_index, node_budget,
            rot_f, rot_b, rot_ptr, col_ptr, col_ids, out):
    size = to_index * ncols
    tab = np.full(size, -1, np.int32)
    trail = np.empty(2 * size, np.int32)
    ded = np.empty(4 * size, np.int32)
    nu = np.empty(to_index, np.int32)
    stamp = np.zeros(to_index, np.int64)
    gen = np.int64(0)
    order = np.empty(to_index, np.int32)
    maxdepth = size + 2
    f_pos = np.empty(maxdepth, np.int32)
    f_cand = np.empty(maxdepth, np.int32)
    f_trail = np.empty(maxdepth, np.int32)
    f_n = np.empty(maxdepth, np.int32)

    depth = 0
    n = 1
    trail_len = 0
    nodes = np.int64(0)
    out_count = 0
    descend = True

    while True:
        if descend:
            pos = -1
            # Slots before the parent's branch slot are always full already.
            p0 = f_pos[depth - 1] + 1 if depth > 0 else 0
            limit = n * ncols
            for p in range(p0, limit):
                if tab[p] == -1:
                    pos = p
                    break
            if pos == -1:
                if n >= from_index:
                    fixed = 1
                    smaller = False
                    for beta in range(1, n):
                        gen += 1
                        oc = _relabel_walk(tab, n, ncols, beta, nu, stamp, gen, order)
                        if oc == _SMALLER:
                            smaller = True
                            break
                        if oc == _EQUAL:
                            fixed += 1
                    if not smaller:
                        if out_count >= out.shape[0]:
                            return out_count, STATUS_OVERFLOW, nodes
                        out[out_count, 0] = n
                        out[out_count, 1] = fixed
                        for x in range(size):
                            out[out_count, 2 + x] = tab[x]
                        out_count += 1
                descend = False
                continue
            f_pos[depth] = pos
            f_cand[depth] = -1
            f_trail[depth] = trail_len
            f_n[depth] = n
            depth += 1
            descend = False
            continue

        if depth == 0:
            return out_count, STATUS_OK, nodes
        frame = depth - 1
        pos = f_pos[frame]
        base_n = f_n[frame]
        while trail_len > f_trail[frame]:
            trail_len -= 1
            tab[trail[trail_len]] = -1
        n = base_n
        alpha = pos // ncols
        c = pos % ncols
        ic = c ^ 1
        beta = f_cand[frame] + 1
        chosen = -1
        while beta < base_n:
            if tab[beta * ncols + ic] == -1:
                chosen = beta
                break
            beta += 1
        if chosen == -1 and beta == base_n and base_n < to_index:
            chosen = base_n
        if chosen == -1:
            depth -= 1
            continue
        f_cand[frame] = chosen
        if chosen == base_n:
            # a definition step: the table grows by one coset
            nodes += 1
            if nodes > node_budget:
                return out_count, STATUS_BUDGET, nodes
            n = base_n + 1
        p2 = chosen * ncols + ic
        tab[pos] = chosen
        tab[p2] = alpha
        trail[trail_len] = pos
        trail[trail_len + 1] = p2
        trail_len += 2
        ded[0] = alpha
        ded[1] = c
        ok, trail_len = _propagate(
            tab, ncols, rot_f, rot_b, rot_ptr, col_ptr, col_ids,
            trail, trail_len, ded, 1,
        )
        if ok == 1:
            good = True
            for beta2 in range(1, n):
                gen += 1
                if _relabel_walk(tab, n, ncols, beta2, nu, stamp, gen, order) == _SMALLER:
                    good = False
                    break
            if good:
                descend = True


def run(ncols, from_index, to_index, node_budget, rotations, result_cap=4096):
    """Drive the compiled search; returns (list of (rows, n, fixed), nodes).

    ``rotations`` is the per-column rotation table from the reference engine.
    Raises nothing itself: budget exhaustion is reported via status so the
    caller owns the error type.
    """
    flat_f = []
    flat_b = []
    rot_ptr = [0]
    col_ptr = [0]
    col_ids = []
    rot_id = 0
    for c in range(ncols):
        for fwd, bwd in rotations[c]:
            flat_f.extend(fwd)
            flat_b.extend(bwd)
            rot_ptr.append(len(flat_f))
            col_ids.append(rot_id)
            rot_id += 1
        col_ptr.append(len(col_ids))

    rot_f = np.array(flat_f or [0], dtype=np.int32)
    rot_b = np.array(flat_b or [0], dtype=np.int32)
    rot_ptr_a = np.array(rot_ptr, dtype=np.int32)
    col_ptr_a = np.array(col_ptr, dtype=np.int32)
    col_ids_a = np.array(col_ids or [0], dtype=np.int32)

    cap = result_cap
    while True:
        out = np.empty((cap, 2 + to_index * ncols), dtype=np.int32)
        count, status, nodes = _search(
            ncols, from_index, to_index, node_budget,
            rot_f, rot_b, rot_ptr_a, col_ptr_a, col_ids_a, out,
        )
        if status == STATUS_OVERFLOW:
            cap *= 4
            continue
        results = []
        for i in range(count):
            n = int(out[i, 0])
            fixed = int(out[i, 1])
            rows = [
                [int(out[i, 2 + r * ncols + c]) for c in range(ncols)]
                for r in range(n)
            ]
            results.append((rows, n, fixed))
        return results, status, int(nodes)

"""Pure-Python kernels, used when the compiled extension is unavailable.

Every function here has a twin of the same name and signature in
``_kernels.pyx``; the two must stay bit-identical.
"""
import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_next(state):
    """Advance a splitmix64 state once. Returns ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def shuffle_indices(n, seed, sattolo):
    state = seed & MASK64
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        state = (state + GOLDEN_GAMMA) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        j = z % i if sattolo else z % (i + 1)
        order[i], order[j] = order[j], order[i]
    return np.array(order, dtype=np.uint32)


def schedule_matrix(order, n):
    """``n x n`` matrix of targets indexed ``[round][source]``; -1 marks a self-loop."""
    out = np.empty((n, n), dtype=np.int64)
    for r, value in enumerate(order.tolist()):
        row = [(value - x) % n for x in range(n)]
        for x in range(n):
            if row[x] == x:
                row[x] = -1
        out[r] = row
    return out


def round_step(order, n, true_round, alive, believed, seen):
    """Run one round of exchanges in place.

    ``alive`` flags admitted nodes, ``believed`` holds each node's idea of the
    current round index (-1 for listen-only nodes), ``seen`` is the cycle's
    edge matrix, updated for newly completed pairs.

    Returns ``(new_edges, idle_slots, live_slots, opportunities)``.
    """
    order_l = order.tolist()
    alive_l = alive.tolist()
    believed_l = believed.tolist()
    true_value = order_l[true_round]
    targets = [-1] * n
    for x in range(n):
        b = believed_l[x]
        if alive_l[x] and b >= 0:
            targets[x] = (order_l[b] - x) % n
    new_edges = idle = live = opportunities = 0
    for x in range(n):
        if not alive_l[x]:
            continue
        live += 1
        scheduled = (true_value - x) % n
        if scheduled == x:
            continue
        if x < scheduled and alive_l[scheduled]:
            opportunities += 1
        t = targets[x]
        if t >= 0 and t != x and targets[t] == x:
            if x < t and not seen[x, t]:
                seen[x, t] = 1
                new_edges += 1
        else:
            idle += 1
    return new_edges, idle, live, opportunities

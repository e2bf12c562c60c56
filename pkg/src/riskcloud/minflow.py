"""Successive-shortest-path min-cost flow for discrete partial assignment.

Specialized to the bipartite structure used by the transport oracle: M unit
sources, N capacitated targets, ship a prescribed number of units at minimal
total cost.  Costs are scaled to integers so all label arithmetic is exact
and no floating-point tie-breaking can produce inconsistent paths.

Shortest augmenting paths are computed with Bellman-Ford style sweeps over
the target layer using reduced costs; node potentials keep reduced costs
nonnegative, and each augmentation ships one unit (source edges have unit
capacity).
"""

from __future__ import annotations

import numpy as np

__all__ = ["min_cost_partial_assignment"]

_INF = np.int64(2**62)


def min_cost_partial_assignment(cost: np.ndarray, target_caps, total_units: int):
    """Ship total_units from M unit sources to capacitated targets.

    cost: (M, N) float matrix; target_caps: units per target; returns
    (total_cost_in_input_units, assignment) where assignment[i] is the target
    of source i or -1.
    """
    cost = np.asarray(cost, dtype=float)
    m, n = cost.shape
    caps = np.asarray(target_caps, dtype=np.int64).copy()
    total_units = int(total_units)
    if total_units > m or total_units > int(caps.sum()):
        raise ValueError("infeasible flow: not enough capacity for the requested units")

    cmax = float(np.max(np.abs(cost))) if cost.size else 1.0
    # Keep every path sum and potential below 2^58 so int64 labels are exact.
    scale = min(1e12, 2.0**58 / max(cmax, 1e-300) / max(m, 2 * n + 4))
    ci = np.rint(cost * scale).astype(np.int64)

    pot_a = np.zeros(m, dtype=np.int64)   # source potentials
    pot_t = np.zeros(n, dtype=np.int64)   # target potentials
    assign = np.full(m, -1, dtype=np.int64)
    used = np.zeros(n, dtype=np.int64)    # units currently shipped per target

    for _ in range(total_units):
        rc = ci + pot_a[:, None] - pot_t[None, :]
        free_src = assign < 0
        d_a = np.where(free_src, np.int64(0), _INF)
        d_t = np.full(n, _INF)
        pred_t = np.full(n, -1, dtype=np.int64)   # source feeding target j
        # Bellman sweeps: paths alternate source -> target -> source ...;
        # a shortest simple path revisits no target, so n+1 sweeps suffice.
        for _ in range(n + 1):
            cand = np.where(d_a[:, None] < _INF, d_a[:, None] + rc, _INF)
            rows = np.flatnonzero(assign >= 0)
            cand[rows, assign[rows]] = _INF  # saturated forward edges
            best_src = np.argmin(cand, axis=0)
            best = cand[best_src, np.arange(n)]
            improved = best < d_t
            if not np.any(improved):
                break
            d_t = np.where(improved, best, d_t)
            pred_t = np.where(improved, best_src, pred_t)
            # relax reverse edges target -> assigned source
            has = assign >= 0
            if np.any(has):
                idx = np.flatnonzero(has)
                j = assign[idx]
                via = np.where(d_t[j] < _INF, d_t[j] - rc[idx, j], _INF)
                upd = via < d_a[idx]
                d_a[idx] = np.where(upd, via, d_a[idx])

        open_t = used < caps
        if not np.any(open_t & (d_t < _INF)):
            raise ValueError("no augmenting path; flow infeasible")
        sink_d = np.where(open_t, d_t, _INF)
        j = int(np.argmin(sink_d))
        dist = sink_d[j]

        # walk back: target j <- source pred_t[j]; if that source was assigned
        # elsewhere, continue from its old target.
        used[j] += 1
        while True:
            i = int(pred_t[j])
            old = int(assign[i])
            assign[i] = j
            if old < 0:
                break
            j = old

        reached_a = d_a < _INF
        reached_t = d_t < _INF
        pot_a[reached_a] += np.minimum(d_a[reached_a], dist)
        pot_t[reached_t] += np.minimum(d_t[reached_t], dist)
        pot_a[~reached_a] += dist
        pot_t[~reached_t] += dist

    shipped = assign >= 0
    total = float(np.sum(cost[np.flatnonzero(shipped), assign[shipped]]))
    return total, assign

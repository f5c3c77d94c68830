"""Maximum-weight clique search over (sub)graphs of the coding graph."""

from __future__ import annotations

from collections import Counter

import numpy as np

from .graph import Subgraph
from .model import EPS, InstanceTooLarge


def max_weight_clique_heuristic(sub: Subgraph, work: Counter | None = None) -> frozenset:
    """Seeded greedy growth, best clique over all seeds.

    Every vertex seeds one clique.  A clique grows by the admissible vertex
    with the largest ``weight * (1 + surviving candidates)``, ties going to
    the earlier vertex, until no common neighbour is left.  All seeds grow
    in lockstep as one boolean matrix, so each growth step is a single
    matrix product and the whole search costs O(omega * |V|^3).

    ``work`` (optional) accumulates the multiply-add count under key
    ``"clique_ops"``.
    """
    pos = sub.positions
    nv = len(pos)
    if nv == 0:
        return frozenset()
    g = sub.graph
    adj = g.adjacency[np.ix_(pos, pos)]
    adj_f = adj.astype(float)
    w = g.weight[pos]

    members = np.eye(nv, dtype=bool)
    cand = adj.copy()
    active = np.flatnonzero(cand.any(axis=1))
    while active.size:
        c = cand[active]
        common = c.astype(float) @ adj_f
        if work is not None:
            work["clique_ops"] += active.size * nv * nv
        score = np.where(c, w[None, :] * (1.0 + common), -np.inf)
        pick = np.argmax(score, axis=1)
        members[active, pick] = True
        c &= adj[pick]
        c[np.arange(active.size), pick] = False
        cand[active] = c
        active = active[c.any(axis=1)]

    totals = members.astype(float) @ w
    best = int(np.argmax(totals))
    return frozenset(g.vertices[pos[k]] for k in np.flatnonzero(members[best]))


def max_weight_clique_exact(sub: Subgraph, vertex_limit: int = 20) -> frozenset:
    """Branch and bound; ties go to the lexicographically smallest vertex set."""
    pos = [int(k) for k in sub.positions]
    if len(pos) > vertex_limit:
        raise InstanceTooLarge(f"{len(pos)} vertices exceeds the exact-search limit {vertex_limit}")
    if not pos:
        return frozenset()
    g = sub.graph
    n = len(pos)
    w = [float(g.weight[k]) for k in pos]
    nbr = []
    for a in range(n):
        mask = 0
        for b in range(n):
            if g.adjacency[pos[a], pos[b]]:
                mask |= 1 << b
        nbr.append(mask)

    best_w = -1.0
    best: tuple = ()

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def expand(clique, cand, cur):
        nonlocal best_w, best
        key = tuple(clique)
        if cur > best_w + EPS or (abs(cur - best_w) <= EPS and key < best):
            best_w, best = cur, key
        if cur + sum(w[b] for b in bits(cand)) < best_w - EPS:
            return
        for b in bits(cand):
            higher = cand & ~((1 << (b + 1)) - 1)
            expand(clique + [b], higher & nbr[b], cur + w[b])

    # local order follows graph vertex order, so index tuples compare like vertex tuples
    for b in range(n):
        expand([b], nbr[b] & ~((1 << (b + 1)) - 1), w[b])
    return frozenset(g.vertices[pos[b]] for b in best)

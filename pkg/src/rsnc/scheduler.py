"""Joint rate selection and XOR coding, one transmission at a time.

Each round tries every rate level of the destinations: restricting the
graph to destinations at least that fast, it takes a heavy clique and
scores it by net benefit (benefit delivered now minus benefit of requests
the transmission's delay makes hopeless).  The best-scoring clique is sent,
deadlines shrink by its duration, and the graph is rebuilt.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace

import numpy as np

from .clique import max_weight_clique_heuristic
from .graph import CodingGraph, Subgraph, build_graph, clique_to_transmission
from .model import (EPS, InstanceTooLarge, Scenario, Schedule, Transmission,
                    evaluate_schedule, leq)


@dataclass(frozen=True)
class MetricU:
    gain: float
    loss: float
    value: float
    f: frozenset
    l: frozenset


def rate_ladder(s: Scenario) -> list[float]:
    """Distinct destination max rates, lowest first."""
    return sorted(set(s.max_rate))


def compute_metric_u(s: Scenario, g: CodingGraph, q, r: float) -> MetricU:
    """Net benefit of XOR-ing the packets of ``q`` and sending at rate ``r``.

    A member of ``q`` counts as delivered when it hears ``r``, wants the
    packet, holds the rest of the XOR and the arrival ``B/r`` is on time.
    Any other request (graph vertex, or failed member) is lost when even an
    immediate follow-up at its own best rate would be late.
    """
    q = frozenset(q)
    for i, _ in q:
        if not leq(r, s.max_rate[i]):
            raise ValueError(f"rate {r} exceeds max rate of destination {s.destinations[i]}")
    B = s.packet_size
    coded = {j for _, j in q}
    delay = B / r
    f = set()
    for i, j in q:
        if (j in s.wants[i] and (coded - {j}) <= s.has[i]
                and leq(delay, s.deadline[(i, j)])):
            f.add((i, j))
    lost = set()
    for v in sorted(set(g.vertices) | q):
        if v in f:
            continue
        i, j = v
        if delay + B / s.max_rate[i] > s.deadline[v] + EPS:
            lost.add(v)
    gain = math.fsum(s.benefit[v] for v in sorted(f))
    loss = math.fsum(s.benefit[v] for v in sorted(lost))
    return MetricU(gain, loss, gain - loss, frozenset(f), frozenset(lost))


def _candidate_key(mu: MetricU, rate: float, k: int, q: frozenset):
    # max U, then min loss, then max rate, then min k, then smallest clique
    return (-round(mu.value, 9), round(mu.loss, 9), -rate, k, tuple(sorted(q)))


def select_transmission(s: Scenario, g: CodingGraph, work: Counter | None = None):
    """Best (Transmission, MetricU) for the next broadcast, or None."""
    if len(g) == 0:
        return None
    best = None
    prev = None
    for k, tr in enumerate(rate_ladder(s)):
        mask = g.rate >= tr - EPS
        if not mask.any():
            break
        if prev is not None and np.array_equal(mask, prev):
            # same subgraph, same clique; the earlier k already wins the tie
            continue
        prev = mask
        q = max_weight_clique_heuristic(Subgraph(g, mask), work)
        if not q:
            continue
        rate = min(s.max_rate[i] for i, _ in q)
        mu = compute_metric_u(s, g, q, rate)
        key = _candidate_key(mu, rate, k, q)
        if best is None or key < best[0]:
            best = (key, q, mu)
    if best is None:
        return None
    _, q, mu = best
    return clique_to_transmission(s, q, g), mu


def advance(s: Scenario, tx: Transmission, drop=()) -> Scenario:
    """Residual instance after ``tx``: delivered and dropped requests leave,
    delivered packets join the holdings, remaining deadlines shrink."""
    gone = set(tx.intended) | set(drop)
    has = [set(h) for h in s.has]
    for i, j in tx.intended:
        has[i].add(j)
    wants, deadline, benefit = [], {}, {}
    for i in range(s.m):
        keep = set()
        for j in s.wants[i]:
            rest = s.deadline[(i, j)] - tx.duration
            if (i, j) in gone or rest <= EPS:
                continue
            keep.add(j)
            deadline[(i, j)] = rest
            benefit[(i, j)] = s.benefit[(i, j)]
        wants.append(frozenset(keep))
    return replace(s, has=tuple(frozenset(h) for h in has), wants=tuple(wants),
                   deadline=deadline, benefit=benefit)


def run_rsnc(s: Scenario, work: Counter | None = None, trace: list | None = None) -> Schedule:
    """Whole session: repeat selection until no vertex is left.

    ``trace`` (optional) collects one ``(Transmission, MetricU)`` per round.
    """
    state = s
    txs = []
    while True:
        g = build_graph(state)
        picked = select_transmission(state, g, work)
        if picked is None:
            break
        tx, mu = picked
        txs.append(tx)
        if trace is not None:
            trace.append((tx, mu))
        state = advance(state, tx, mu.l)
    return evaluate_schedule(s, txs)


def run_rsnc_exact(s: Scenario, max_vertices: int = 8) -> Schedule:
    """Benefit-optimal sequence of on-time XOR transmissions, by search.

    Works directly on transmission semantics rather than on the coding
    graph: a candidate broadcast is any set of live requests at distinct
    destinations whose XOR each member can decode, sent at the slowest
    member rate, with every member on time.  Search state is the set of
    delivered requests plus the elapsed time; holdings follow from it.
    States dominated by an earlier state (same delivered set, no later
    clock, no less benefit) are pruned.
    """
    B = s.packet_size
    # requests that are feasible at all, in (i, j) order
    verts = [r for r in s.requests() if leq(B / s.max_rate[r[0]], s.deadline[r])]
    if len(verts) > max_vertices:
        raise InstanceTooLarge(f"{len(verts)} vertices exceeds the exact-search limit {max_vertices}")
    nv = len(verts)
    dest = [i for i, _ in verts]
    pkt = [j for _, j in verts]
    rate = [s.max_rate[i] for i in dest]
    dl = [s.deadline[v] for v in verts]
    wt = [s.benefit[v] for v in verts]

    subsets = []
    for mask in range(1, 1 << nv):
        members = [b for b in range(nv) if mask >> b & 1]
        if len({dest[b] for b in members}) == len(members):
            subsets.append((mask, members))

    best = {"value": 0.0, "seq": []}
    seen: dict[int, list[tuple[float, float]]] = {}

    def holdings(served):
        h = [set(x) for x in s.has]
        for b in range(nv):
            if served >> b & 1:
                h[dest[b]].add(pkt[b])
        return h

    def search(served, elapsed, gained, seq):
        if gained > best["value"] + EPS:
            best["value"], best["seq"] = gained, list(seq)
        record = seen.setdefault(served, [])
        for e, gv in record:
            if e <= elapsed + EPS and gv >= gained - EPS:
                return
        record.append((elapsed, gained))
        live = [b for b in range(nv) if not served >> b & 1
                and leq(elapsed + B / rate[b], dl[b])]
        if gained + math.fsum(wt[b] for b in live) <= best["value"] + EPS:
            return
        live_mask = sum(1 << b for b in live)
        h = holdings(served)
        for mask, members in subsets:
            if mask & ~live_mask:
                continue
            r = min(rate[b] for b in members)
            t = elapsed + B / r
            coded = {pkt[b] for b in members}
            if all(leq(t, dl[b]) and (coded - {pkt[b]}) <= h[dest[b]] for b in members):
                seq.append((mask, r))
                search(served | mask, t, gained + math.fsum(wt[b] for b in members), seq)
                seq.pop()

    search(0, 0.0, 0.0, [])
    txs = []
    for mask, r in best["seq"]:
        members = [b for b in range(nv) if mask >> b & 1]
        txs.append(Transmission.at_rate({pkt[b] for b in members}, r,
                                        {verts[b] for b in members}, B))
    return evaluate_schedule(s, txs)

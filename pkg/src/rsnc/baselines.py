"""Comparison schemes: DSF coding, SIN-1, random linear coding, index coding.

None of them adapts the rate to the clique.  DSF, index coding and RLNC
broadcast at the slowest destination rate so every node can listen; SIN-1
sends uncoded packets at the slowest rate among the packet's requesters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clique import max_weight_clique_heuristic
from .gf import GaloisField, RankTracker
from .graph import assemble_graph, holdings_matrix
from .model import EPS, Scenario, Schedule, Transmission, evaluate_schedule, leq

ALGORITHMS = ("dsf", "sin1", "rlnc", "index_coding")


@dataclass(frozen=True)
class BaselineConfig:
    algorithm: str = "dsf"
    seed: int = 0
    field_size: int = 256
    sin1_rate: str = "requesters"  # or "global"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown baseline {self.algorithm!r}")
        if self.field_size < 2:
            raise ValueError("field size must be at least 2")
        if self.sin1_rate not in ("requesters", "global"):
            raise ValueError(f"unknown SIN-1 rate policy {self.sin1_rate!r}")


def _fixed_rate_coding(s: Scenario, prune_expired: bool) -> Schedule:
    B = s.packet_size
    rate = min(s.max_rate)
    rates = np.asarray(s.max_rate, dtype=float)
    holdings = holdings_matrix(s)
    pending = set(s.requests())
    t = 0.0
    txs = []
    while pending:
        if prune_expired:
            pending = {r for r in pending if s.deadline[r] - t > EPS}
        g = assemble_graph(B, rates, holdings, sorted(pending), s.deadline, s.benefit,
                           rate_aware=False)
        if len(g) == 0:
            break
        q = max_weight_clique_heuristic(g.full())
        tx = Transmission.at_rate({j for _, j in q}, rate, q, B)
        txs.append(tx)
        t += tx.duration
        for i, j in q:
            holdings[i, j] = True
        pending -= q
    return evaluate_schedule(s, txs)


def run_dsf(s: Scenario) -> Schedule:
    """Heaviest clique of the fixed-rate coding graph each round.

    Requests whose deadline has already passed leave the graph; the rate
    never adapts, so late deliveries simply count as misses.
    """
    return _fixed_rate_coding(s, prune_expired=True)


def run_index_coding(s: Scenario) -> Schedule:
    """Like DSF but fully deadline-oblivious: every request is served."""
    return _fixed_rate_coding(s, prune_expired=False)


def sin1_value(s: Scenario, j: int, requesters, now: float) -> float:
    slack = min(s.deadline[(i, j)] for i in requesters) - now
    return slack / len(requesters)


def run_sin1(s: Scenario, rate_policy: str = "requesters") -> Schedule:
    """Uncoded broadcast of the packet with the smallest slack per requester.

    A request stays live while its own best rate could still meet it.  The
    packet goes out at the slowest rate among its live requesters
    (``rate_policy="requesters"``) or at the global slowest rate
    (``"global"``).
    """
    B = s.packet_size
    global_rate = min(s.max_rate)
    pending = set(s.requests())
    t = 0.0
    txs = []
    while True:
        pending = {(i, j) for i, j in pending if leq(t + B / s.max_rate[i], s.deadline[(i, j)])}
        if not pending:
            break
        by_packet: dict[int, list[int]] = {}
        for i, j in sorted(pending):
            by_packet.setdefault(j, []).append(i)
        j = min(by_packet, key=lambda p: (sin1_value(s, p, by_packet[p], t), p))
        dests = by_packet[j]
        if rate_policy == "global":
            rate = global_rate
        else:
            rate = min(s.max_rate[i] for i in dests)
        tx = Transmission.at_rate({j}, rate, {(i, j) for i in dests}, B)
        txs.append(tx)
        t += tx.duration
        pending -= tx.intended
    return evaluate_schedule(s, txs)


def run_rlnc(s: Scenario, cfg: BaselineConfig | None = None) -> Schedule:
    """Random linear combinations of all packets at the slowest rate.

    A destination's held packets count as known unit vectors; it decodes
    everything once its rank reaches ``n``.  Its requests are met when that
    decode time is within their deadlines.  Broadcasting stops when no
    undecoded destination has a request the next reception could still
    meet.
    """
    cfg = cfg or BaselineConfig("rlnc")
    field = GaloisField(cfg.field_size)
    rng = np.random.default_rng(cfg.seed)
    B, n = s.packet_size, s.n
    rate = min(s.max_rate)
    dur = B / rate
    trackers = {}
    for i in range(s.m):
        if not s.wants[i]:
            continue
        tr = RankTracker(field, n)
        for j in sorted(s.has[i]):
            tr.add_unit(j)
        trackers[i] = tr

    t = 0.0
    txs = []
    satisfied, decoded_at = set(), {}
    waiting = {i for i, tr in trackers.items() if tr.rank < n}
    while waiting:
        if not any(leq(t + dur, s.deadline[(i, j)]) for i in waiting for j in s.wants[i]):
            break
        coeffs = field.random_vector(rng, n)
        t += dur
        done = set()
        for i in sorted(waiting):
            trackers[i].add(coeffs)
            if trackers[i].rank == n:
                done.add(i)
        intended = set()
        for i in sorted(done):
            for j in sorted(s.wants[i]):
                intended.add((i, j))
                decoded_at[(i, j)] = t
                if leq(t, s.deadline[(i, j)]):
                    satisfied.add((i, j))
        waiting -= done
        txs.append(Transmission(frozenset(range(n)), rate, dur, frozenset(intended)))
    total = math.fsum(s.benefit[r] for r in sorted(satisfied))
    return Schedule(tuple(txs), frozenset(satisfied), total, decoded_at)


def run_baseline(s: Scenario, cfg: BaselineConfig) -> Schedule:
    if cfg.algorithm == "dsf":
        return run_dsf(s)
    if cfg.algorithm == "sin1":
        return run_sin1(s, cfg.sin1_rate)
    if cfg.algorithm == "rlnc":
        return run_rlnc(s, cfg)
    return run_index_coding(s)

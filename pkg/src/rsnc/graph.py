"""Rate- and deadline-aware coding graph.

A vertex ``(i, j)`` is a request that can still be met at destination i's
best rate.  Two vertices are adjacent when one XOR of their packets, sent at
the slower of the two destination rates, lets both destinations decode on
time.  Every clique is therefore a feasible single transmission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .model import EPS, Request, Scenario, Transmission

Clique = frozenset  # of Request


@dataclass(frozen=True, eq=False)
class CodingGraph:
    vertices: tuple[Request, ...]
    weight: np.ndarray
    rate: np.ndarray
    min_rate: np.ndarray
    adjacency: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "_pos", {v: k for k, v in enumerate(self.vertices)})

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self._pos

    def position(self, v: Request) -> int:
        return self._pos[v]

    def weights(self) -> dict[Request, float]:
        return {v: float(w) for v, w in zip(self.vertices, self.weight)}

    def has_edge(self, u: Request, v: Request) -> bool:
        return bool(self.adjacency[self._pos[u], self._pos[v]])

    def neighbors(self, v: Request) -> list[Request]:
        row = self.adjacency[self._pos[v]]
        return [self.vertices[k] for k in np.flatnonzero(row)]

    def edges(self) -> list[tuple[Request, Request]]:
        a, b = np.nonzero(np.triu(self.adjacency, 1))
        return [(self.vertices[x], self.vertices[y]) for x, y in zip(a, b)]

    def is_clique(self, q: Iterable[Request]) -> bool:
        q = list(q)
        if any(v not in self._pos for v in q):
            return False
        idx = [self._pos[v] for v in q]
        sub = self.adjacency[np.ix_(idx, idx)]
        return bool(np.all(sub | np.eye(len(idx), dtype=bool)))

    def full(self) -> "Subgraph":
        return Subgraph(self, np.ones(len(self), dtype=bool))

    def subgraph(self, keep: Callable[[Request], bool]) -> "Subgraph":
        return Subgraph(self, np.array([bool(keep(v)) for v in self.vertices], dtype=bool))

    def edge_list(self) -> str:
        """Debug dump, one ``i,j i',j'`` pair per line."""
        return "".join(f"{a[0]},{a[1]} {b[0]},{b[1]}\n" for a, b in self.edges())


@dataclass(frozen=True, eq=False)
class Subgraph:
    graph: CodingGraph
    mask: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def vertices(self) -> list[Request]:
        return [self.graph.vertices[k] for k in self.positions]

    def __len__(self) -> int:
        return int(self.mask.sum())


def assemble_graph(packet_size: float, max_rate: np.ndarray, holdings: np.ndarray,
                   requests: list[Request], deadline: dict, benefit: dict,
                   rate_aware: bool = True) -> CodingGraph:
    """Build the graph from raw state arrays.

    ``holdings`` is an m x n boolean matrix.  With ``rate_aware=False`` the
    rate conditions are skipped, which yields the classic fixed-rate
    coding graph used by the deadline-oblivious baselines.
    """
    if rate_aware:
        kept = [r for r in requests if packet_size / deadline[r] <= max_rate[r[0]] + EPS]
    else:
        kept = list(requests)
    k = len(kept)
    if k == 0:
        z = np.zeros(0)
        return CodingGraph((), z, z, z, np.zeros((0, 0), dtype=bool))
    vi = np.array([r[0] for r in kept])
    vj = np.array([r[1] for r in kept])
    rate = np.asarray(max_rate, dtype=float)[vi]
    rmin = packet_size / np.array([deadline[r] for r in kept], dtype=float)
    weight = np.array([benefit[r] for r in kept], dtype=float)

    diff_dest = vi[:, None] != vi[None, :]
    same_packet = vj[:, None] == vj[None, :]
    # holdings[i', j] for row (i, j), column (i', j')
    they_hold_mine = holdings[vi[None, :], vj[:, None]]
    adj = diff_dest & (same_packet | (they_hold_mine & they_hold_mine.T))
    if rate_aware:
        fast_enough = rmin[:, None] <= rate[None, :] + EPS
        adj &= fast_enough & fast_enough.T
    np.fill_diagonal(adj, False)
    return CodingGraph(tuple(kept), weight, rate, rmin, adj)


def holdings_matrix(s: Scenario) -> np.ndarray:
    h = np.zeros((s.m, s.n), dtype=bool)
    for i, pk in enumerate(s.has):
        h[i, list(pk)] = True
    return h


def build_graph(s: Scenario) -> CodingGraph:
    return assemble_graph(s.packet_size, np.asarray(s.max_rate, dtype=float), holdings_matrix(s),
                          s.requests(), s.deadline, s.benefit)


def clique_to_transmission(s: Scenario, q: Iterable[Request], g: CodingGraph | None = None) -> Transmission:
    """XOR of the clique's packets at the slowest member destination's rate."""
    q = frozenset(q)
    if not q:
        raise ValueError("empty clique has no transmission")
    if g is None:
        g = build_graph(s)
    if not g.is_clique(q):
        raise ValueError(f"not a clique of the coding graph: {sorted(q)}")
    rate = min(s.max_rate[i] for i, _ in q)
    return Transmission.at_rate({j for _, j in q}, rate, q, s.packet_size)


def clique_weight(g: CodingGraph, q: Iterable[Request]) -> float:
    return math.fsum(float(g.weight[g.position(v)]) for v in sorted(q))

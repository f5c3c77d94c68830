"""Pairwise coding under one shared deadline.

With a common deadline ``T`` and at most two packets per XOR, scheduling is
a budgeted selection of disjoint cliques of size one or two: each clique
costs its slowest destination's airtime and is worth the benefit it covers.

Two greedies live here.  ``greedy_pairwise`` keeps selections disjoint by
substituting the uncovered remainder of an overlapping pair; the
``khuller_greedy`` reference is the plain budgeted-coverage greedy that
allows overlaps.  Both share one ratio order so their iteration traces can
be compared step by step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import build_graph
from .model import EPS, InstanceTooLarge, Scenario, Transmission


@dataclass(frozen=True)
class PairwiseInstance:
    cliques: tuple[frozenset, ...]
    cost: tuple[float, ...]
    weight: tuple[float, ...]
    budget: float
    element_weight: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.cliques)

    def index_of(self, clique) -> int:
        return self.cliques.index(frozenset(clique))


def make_instance(cliques, cost, element_weight, budget) -> PairwiseInstance:
    """Instance from raw cliques; over-budget cliques are dropped here."""
    keep = [k for k, c in enumerate(cost) if c <= budget + EPS]
    cl = tuple(frozenset(cliques[k]) for k in keep)
    w = tuple(math.fsum(element_weight[v] for v in sorted(q)) for q in cl)
    return PairwiseInstance(cl, tuple(float(cost[k]) for k in keep), w, float(budget),
                            dict(element_weight))


def enumerate_pairwise(s: Scenario, T: float | None = None) -> PairwiseInstance:
    """Every vertex and every edge of the coding graph as a clique."""
    deadlines = [s.deadline[r] for r in s.requests()]
    if deadlines:
        lo, hi = min(deadlines), max(deadlines)
        if hi - lo > EPS:
            raise ValueError(f"pairwise coding needs one common deadline, got [{lo}, {hi}]")
        if T is None:
            T = lo
        elif abs(T - lo) > EPS:
            raise ValueError(f"deadline {lo} differs from budget {T}")
    elif T is None:
        raise ValueError("no requests and no budget given")
    g = build_graph(s)
    B = s.packet_size
    cliques, cost = [], []
    for v in g.vertices:
        cliques.append({v})
        cost.append(B / s.max_rate[v[0]])
    for u, v in g.edges():
        cliques.append({u, v})
        cost.append(max(B / s.max_rate[u[0]], B / s.max_rate[v[0]]))
    return make_instance(cliques, cost, g.weights(), T)


@dataclass
class GreedyState:
    selected: list[int] = field(default_factory=list)
    covered: set = field(default_factory=set)
    spent: float = 0.0
    candidates: set = field(default_factory=set)

    def snapshot(self) -> "GreedyState":
        return GreedyState(list(self.selected), set(self.covered), self.spent, set(self.candidates))


@dataclass
class GreedyStep:
    considered: int
    action: str  # "select", "residual", "over_budget", "discard"
    added: int | None
    state: GreedyState


@dataclass
class PairwiseResult:
    selection: list[int]
    total_weight: float
    collection_weight: float = 0.0
    trace: list[GreedyStep] = field(default_factory=list)


def _residual_weight(inst: PairwiseInstance, h: int, covered: set) -> float:
    return math.fsum(inst.element_weight[v] for v in sorted(inst.cliques[h] - covered))


def _pick(inst: PairwiseInstance, pool: set, covered: set) -> int:
    # max ratio, then larger residual weight, then cheaper, then enumeration order
    def key(h):
        w = _residual_weight(inst, h, covered)
        return (-round(w / inst.cost[h], 12), -round(w, 12), inst.cost[h], h)
    return min(pool, key=key)


def _covered_weight(inst: PairwiseInstance, covered) -> float:
    return math.fsum(inst.element_weight[v] for v in sorted(covered))


def _best_single(inst: PairwiseInstance) -> int | None:
    if not inst.cliques:
        return None
    return min(range(len(inst)), key=lambda h: (-inst.weight[h], h))


def greedy_pairwise(inst: PairwiseInstance) -> PairwiseResult:
    st = GreedyState(candidates=set(range(len(inst))))
    singleton = {q: h for h, q in enumerate(inst.cliques) if len(q) == 1}
    trace = []
    while st.candidates:
        h = _pick(inst, st.candidates, st.covered)
        q = inst.cliques[h]
        added = None
        if st.spent + inst.cost[h] > inst.budget + EPS:
            action = "over_budget"
        elif not (q & st.covered):
            action, added = "select", h
        else:
            rest = q - st.covered
            if rest:
                h2 = singleton.get(frozenset(rest))
                if h2 is None or h2 not in st.candidates:
                    raise RuntimeError(f"residual clique {sorted(rest)} missing from candidates")
                action, added = "residual", h2
                st.candidates.discard(h2)
            else:
                action = "discard"
        if added is not None:
            st.selected.append(added)
            st.covered |= inst.cliques[added]
            st.spent += inst.cost[added]
        st.candidates.discard(h)
        trace.append(GreedyStep(h, action, added, st.snapshot()))

    collected = _covered_weight(inst, st.covered)
    top = _best_single(inst)
    if top is not None and inst.weight[top] > collected + EPS:
        return PairwiseResult([top], inst.weight[top], collected, trace)
    return PairwiseResult(list(st.selected), collected, collected, trace)


def khuller_greedy(inst: PairwiseInstance) -> PairwiseResult:
    """Budgeted maximum coverage greedy; overlapping picks are allowed.

    Candidates that would add no uncovered weight are passed over instead
    of being paid for.  ``total_weight`` is the covered weight, without any
    best-single-clique comparison.
    """
    st = GreedyState(candidates=set(range(len(inst))))
    trace = []
    while st.candidates:
        h = _pick(inst, st.candidates, st.covered)
        added = None
        if st.spent + inst.cost[h] > inst.budget + EPS:
            action = "over_budget"
        elif inst.cliques[h] - st.covered:
            action, added = "select", h
            st.selected.append(h)
            st.covered |= inst.cliques[h]
            st.spent += inst.cost[h]
        else:
            action = "discard"
        st.candidates.discard(h)
        trace.append(GreedyStep(h, action, added, st.snapshot()))
    w = _covered_weight(inst, st.covered)
    return PairwiseResult(list(st.selected), w, w, trace)


def exact_pairwise(inst: PairwiseInstance, max_cliques: int = 22) -> PairwiseResult:
    """Exhaustive optimum over disjoint, within-budget clique collections."""
    H = len(inst)
    if H > max_cliques:
        raise InstanceTooLarge(f"{H} cliques exceeds the exhaustive-search limit {max_cliques}")
    order = sorted(range(H), key=lambda h: (inst.cost[h], h))
    elems = sorted({v for q in inst.cliques for v in q})
    bit = {v: 1 << k for k, v in enumerate(elems)}
    ew = [inst.element_weight[v] for v in elems]
    masks = [sum(bit[v] for v in inst.cliques[h]) for h in order]

    best = {"w": 0.0, "sel": []}

    def free_weight(used):
        return math.fsum(ew[k] for k in range(len(elems)) if not used >> k & 1)

    def dfs(pos, used, spent, w, sel):
        if w > best["w"] + EPS:
            best["w"], best["sel"] = w, list(sel)
        if pos == H or w + free_weight(used) <= best["w"] + EPS:
            return
        h = order[pos]
        # cliques are cost-sorted: once one is unaffordable, all later ones are
        if spent + inst.cost[h] > inst.budget + EPS:
            return
        if not masks[pos] & used:
            sel.append(h)
            dfs(pos + 1, used | masks[pos], spent + inst.cost[h], w + inst.weight[h], sel)
            sel.pop()
        dfs(pos + 1, used, spent, w, sel)

    dfs(0, 0, 0.0, 0.0, [])
    return PairwiseResult(sorted(best["sel"]), best["w"], best["w"])


def exact_pairwise_milp(inst: PairwiseInstance) -> PairwiseResult:
    """Same optimum as :func:`exact_pairwise` via a 0-1 program (HiGHS)."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    H = len(inst)
    if H == 0:
        return PairwiseResult([], 0.0, 0.0)
    elems = sorted({v for q in inst.cliques for v in q})
    rows = np.zeros((len(elems) + 1, H))
    rows[0] = inst.cost
    for h, q in enumerate(inst.cliques):
        for v in q:
            rows[1 + elems.index(v), h] = 1.0
    ub = np.concatenate([[inst.budget + EPS], np.ones(len(elems))])
    res = milp(-np.asarray(inst.weight), integrality=np.ones(H),
               bounds=Bounds(0, 1), constraints=LinearConstraint(rows, -np.inf, ub),
               options={"mip_rel_gap": 0.0})
    if not res.success:
        raise RuntimeError(f"MILP solver failed: {res.message}")
    sel = [h for h in range(H) if res.x[h] > 0.5]
    w = math.fsum(inst.weight[h] for h in sel)
    return PairwiseResult(sel, w, w)


def selection_to_transmissions(s: Scenario, inst: PairwiseInstance, selection) -> list[Transmission]:
    """Each selected clique as one broadcast at its slowest destination's rate."""
    out = []
    for h in selection:
        q = inst.cliques[h]
        rate = min(s.max_rate[i] for i, _ in q)
        out.append(Transmission.at_rate({j for _, j in q}, rate, q, s.packet_size))
    return out

"""Random scenario generation, paired experiments and CSV output.

Every random field of a sample (rates, wants, holdings, deadlines,
benefits) comes from its own substream keyed by ``(seed, sample, field,
destination)``.  Sweeping one parameter therefore leaves the other draws
untouched: raising ``Tmax`` stretches the same deadlines, adding
destinations keeps the earlier ones, adding packets extends each row.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Sequence

import numpy as np

from .baselines import BaselineConfig, run_dsf, run_index_coding, run_rlnc, run_sin1
from .model import Scenario, Schedule, deadline_miss_ratio, validate_scenario
from .pairwise import enumerate_pairwise, exact_pairwise, exact_pairwise_milp, greedy_pairwise
from .scheduler import run_rsnc

_FIELD_ID = {"rate": 0, "wants": 1, "has": 2, "deadline": 3, "benefit": 4, "rlnc": 5}


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 10
    m: int = 10
    B: float = 500.0
    rmin: float = 10.0
    rmax: float = 50.0
    Tmin: float = 10.0
    Tmax: float = 50.0
    alpha_min: float = 0.5
    alpha_max: float = 2.0
    has_density: float = 0.5
    samples: int = 200
    seed: int = 0
    want_prob: float = 0.5
    # fixed total number of requests, spread uniformly over the (i, j) grid
    requests: int | None = None
    common_deadline: float | None = None
    # (alpha_A, alpha_B): first half of the requests in (i, j) order get A
    alpha_classes: tuple | None = None

    def __post_init__(self):
        problems = []
        if self.n < 1 or self.m < 1:
            problems.append("n and m must be positive")
        if not 0 < self.rmin <= self.rmax:
            problems.append("need 0 < rmin <= rmax")
        if not 0 < self.Tmin <= self.Tmax:
            problems.append("need 0 < Tmin <= Tmax")
        if not 0 < self.alpha_min <= self.alpha_max:
            problems.append("need 0 < alpha_min <= alpha_max")
        if not 0 <= self.has_density <= 1:
            problems.append("has_density must lie in [0, 1]")
        if not 0 < self.want_prob <= 1:
            problems.append("want_prob must lie in (0, 1]")
        if self.samples < 1:
            problems.append("samples must be >= 1")
        if self.B <= 0:
            problems.append("B must be positive")
        if self.requests is not None and not 1 <= self.requests <= self.n * self.m:
            problems.append("requests must lie in [1, n*m]")
        if self.common_deadline is not None and self.common_deadline <= 0:
            problems.append("common_deadline must be positive")
        if self.alpha_classes is not None:
            if len(self.alpha_classes) != 2 or min(self.alpha_classes) <= 0:
                problems.append("alpha_classes must be two positive benefits")
        if problems:
            raise ValueError("; ".join(problems))

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorConfig":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config fields {sorted(extra)}")
        doc = dict(doc)
        if doc.get("alpha_classes") is not None:
            doc["alpha_classes"] = tuple(doc["alpha_classes"])
        return cls(**doc)

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["alpha_classes"] is not None:
            d["alpha_classes"] = list(d["alpha_classes"])
        return d


def _stream(cfg: GeneratorConfig, sample: int, name: str, *extra: int) -> np.random.Generator:
    ss = np.random.SeedSequence(cfg.seed, spawn_key=(sample, _FIELD_ID[name], *extra))
    return np.random.default_rng(ss)


def generate_scenario(cfg: GeneratorConfig, sample_index: int) -> Scenario:
    n, m = cfg.n, cfg.m
    rates = tuple(cfg.rmin + _stream(cfg, sample_index, "rate", i).random() * (cfg.rmax - cfg.rmin)
                  for i in range(m))

    if cfg.requests is None:
        wants = []
        for i in range(m):
            u = _stream(cfg, sample_index, "wants", i).random(n + 1)
            w = {j for j in range(n) if u[j] < cfg.want_prob}
            if not w:
                w = {min(int(u[n] * n), n - 1)}
            wants.append(frozenset(w))
    else:
        cells = _stream(cfg, sample_index, "wants").permutation(n * m)[:cfg.requests]
        rows = [set() for _ in range(m)]
        for c in cells:
            rows[int(c) // n].add(int(c) % n)
        wants = [frozenset(r) for r in rows]

    has = []
    for i in range(m):
        u = _stream(cfg, sample_index, "has", i).random(n)
        has.append(frozenset(j for j in range(n) if j not in wants[i] and u[j] < cfg.has_density))

    deadline, benefit = {}, {}
    for i in range(m):
        ud = _stream(cfg, sample_index, "deadline", i).random(n)
        ub = _stream(cfg, sample_index, "benefit", i).random(n)
        for j in sorted(wants[i]):
            if cfg.common_deadline is not None:
                deadline[(i, j)] = float(cfg.common_deadline)
            else:
                deadline[(i, j)] = cfg.Tmin + ud[j] * (cfg.Tmax - cfg.Tmin)
            benefit[(i, j)] = cfg.alpha_min + ub[j] * (cfg.alpha_max - cfg.alpha_min)

    s = Scenario(float(cfg.B), tuple(f"p{j + 1}" for j in range(n)),
                 tuple(f"d{i + 1}" for i in range(m)), tuple(has), tuple(wants),
                 deadline, benefit, rates)
    if cfg.alpha_classes is not None:
        s = replace(s, benefit=_class_benefits(s, cfg.alpha_classes))
    return s


def _class_benefits(s: Scenario, classes) -> dict:
    reqs = s.requests()
    half = len(reqs) // 2
    return {r: float(classes[0] if k < half else classes[1]) for k, r in enumerate(reqs)}


def higher_benefit_requests(s: Scenario) -> set:
    """Requests of the second benefit class (second half in (i, j) order)."""
    reqs = s.requests()
    return set(reqs[len(reqs) // 2:])


def hb_success_ratio(s: Scenario, sched: Schedule) -> float:
    if not sched.satisfied:
        return math.nan
    return len(sched.satisfied & higher_benefit_requests(s)) / len(sched.satisfied)


# --------------------------------------------------------------------------
# experiments

def _algorithms(cfg: GeneratorConfig, sample: int) -> dict[str, Callable[[Scenario], Schedule]]:
    rlnc_seed = int(np.random.SeedSequence(cfg.seed, spawn_key=(sample, _FIELD_ID["rlnc"]))
                    .generate_state(1)[0])
    return {
        "rsnc": run_rsnc,
        "dsf": run_dsf,
        "sin1": run_sin1,
        "rlnc": lambda s: run_rlnc(s, BaselineConfig("rlnc", seed=rlnc_seed)),
        "index": run_index_coding,
    }


def canonical_algorithm(tag: str) -> str:
    tag = tag.strip().lower()
    if tag == "index_coding":
        return "index"
    if tag not in ("rsnc", "dsf", "sin1", "rlnc", "index"):
        raise ValueError(f"unknown algorithm {tag!r}")
    return tag


CSV_COLUMNS = ["sweep_param", "algorithm", "sample", "total_benefit", "miss_ratio", "hb_success_ratio"]


@dataclass
class ExperimentResult:
    rows: list[dict] = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)

    def aggregate(self) -> dict:
        groups: dict = {}
        for row in self.rows:
            groups.setdefault((row["sweep_param"], row["algorithm"]), []).append(row)
        out = {}
        for key, rows in groups.items():
            stats = {}
            for metric in ("total_benefit", "miss_ratio", "hb_success_ratio"):
                vals = np.array([r[metric] for r in rows], dtype=float)
                vals = vals[~np.isnan(vals)]
                if vals.size == 0:
                    stats[metric] = (math.nan, math.nan)
                    continue
                se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
                stats[metric] = (float(vals.mean()), se)
            out[key] = stats
        return out

    def mean(self, sweep_param: str, algorithm: str, metric: str = "total_benefit") -> float:
        return self.aggregates[(sweep_param, algorithm)][metric][0]

    def values(self, sweep_param: str, algorithm: str, metric: str = "total_benefit") -> np.ndarray:
        rows = [r for r in self.rows if r["sweep_param"] == sweep_param and r["algorithm"] == algorithm]
        return np.array([r[metric] for r in sorted(rows, key=lambda r: r["sample"])], dtype=float)

    def sweep_points(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r["sweep_param"] not in seen:
                seen.append(r["sweep_param"])
        return seen

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            hb = r["hb_success_ratio"]
            w.writerow([r["sweep_param"], r["algorithm"], r["sample"], repr(r["total_benefit"]),
                        repr(r["miss_ratio"]), "" if math.isnan(hb) else repr(hb)])
        return buf.getvalue()


def sweep_label(overrides: dict) -> str:
    if not overrides:
        return "base"
    return ";".join(f"{k}={overrides[k]}" for k in sorted(overrides))


def run_experiment(cfg: GeneratorConfig, algorithms: Sequence[str],
                   sweep: Sequence[dict] | None = None) -> ExperimentResult:
    """Run every algorithm on the identical scenario of every sample.

    ``sweep`` is a list of field overrides applied to ``cfg``; each entry is
    one sweep point, labelled ``"k=v;..."`` in the output.
    """
    algos = [canonical_algorithm(a) for a in algorithms]
    result = ExperimentResult()
    for overrides in (sweep or [{}]):
        point = replace(cfg, **overrides)
        label = sweep_label(overrides)
        for sample in range(point.samples):
            s = generate_scenario(point, sample)
            report = validate_scenario(s)
            if not report.ok:
                raise ValueError(f"generated scenario {sample} invalid: {report.violations}")
            runners = _algorithms(point, sample)
            for a in algos:
                sched = runners[a](s)
                hb = hb_success_ratio(s, sched) if point.alpha_classes is not None else math.nan
                result.rows.append({
                    "sweep_param": label, "algorithm": a, "sample": sample,
                    "total_benefit": sched.total_benefit,
                    "miss_ratio": deadline_miss_ratio(sched, s),
                    "hb_success_ratio": hb,
                })
    result.aggregates = result.aggregate()
    return result


PAIRWISE_COLUMNS = ["sample", "greedy_weight", "exact_weight", "ratio"]


@dataclass
class PairwiseExperimentResult:
    rows: list[dict] = field(default_factory=list)

    def ratios(self) -> np.ndarray:
        return np.array([r["ratio"] for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(PAIRWISE_COLUMNS)
        for r in self.rows:
            w.writerow([r["sample"], repr(r["greedy_weight"]), repr(r["exact_weight"]), repr(r["ratio"])])
        return buf.getvalue()


def pairwise_config(**overrides) -> GeneratorConfig:
    """Shared-deadline settings: 10 x 10, B = 100, rates 10-100, benefits 1-10."""
    base = dict(n=10, m=10, B=100.0, rmin=10.0, rmax=100.0, alpha_min=1.0, alpha_max=10.0,
                common_deadline=20.0)
    base.update(overrides)
    return GeneratorConfig(**base)


def run_pairwise_experiment(cfg: GeneratorConfig, T: float, oracle: str = "auto",
                            max_cliques: int = 22) -> PairwiseExperimentResult:
    """Greedy pairwise coding against the optimum on shared-deadline samples.

    ``oracle`` is ``"enumerate"`` (exhaustive search, raises past
    ``max_cliques``), ``"milp"``, or ``"auto"`` (exhaustive when small).
    """
    point = replace(cfg, common_deadline=T)
    out = PairwiseExperimentResult()
    for sample in range(point.samples):
        inst = enumerate_pairwise(generate_scenario(point, sample), T)
        greedy = greedy_pairwise(inst).total_weight
        if oracle == "enumerate" or (oracle == "auto" and len(inst) <= max_cliques):
            exact = exact_pairwise(inst, max_cliques).total_weight
        elif oracle in ("milp", "auto"):
            exact = exact_pairwise_milp(inst).total_weight
        else:
            raise ValueError(f"unknown oracle {oracle!r}")
        ratio = 1.0 if exact <= 0 else greedy / exact
        out.rows.append({"sample": sample, "greedy_weight": greedy, "exact_weight": exact,
                         "ratio": ratio})
    return out


# --------------------------------------------------------------------------
# built-in sweep presets: (base config, sweep overrides)

def sweep_presets(samples: int = 200, seed: int = 0) -> dict:
    common = dict(samples=samples, seed=seed)
    m_sweep = [{"m": m} for m in range(5, 16)]
    return {
        "rate_range": (GeneratorConfig(**common),
                      [{"rmin": lo, "rmax": hi} for lo, hi in
                       ((10.0, 50.0), (20.0, 60.0), (30.0, 70.0), (40.0, 80.0), (50.0, 100.0))]),
        "dests_slow": (GeneratorConfig(rmin=10.0, rmax=50.0, **common), m_sweep),
        "dests_fast": (GeneratorConfig(rmin=50.0, rmax=100.0, **common), m_sweep),
        "packets_T50": (GeneratorConfig(Tmax=50.0, **common), [{"n": n} for n in (10, 20, 30, 40)]),
        "packets_T80": (GeneratorConfig(Tmax=80.0, **common), [{"n": n} for n in (10, 20, 30, 40)]),
        "miss_slow": (GeneratorConfig(rmin=10.0, rmax=50.0, alpha_min=1.0, alpha_max=1.0, **common),
                           m_sweep),
        "miss_fast": (GeneratorConfig(rmin=50.0, rmax=100.0, alpha_min=1.0, alpha_max=1.0, **common),
                           m_sweep),
        "benefit_classes": (GeneratorConfig(requests=40, common_deadline=30.0, alpha_min=1.0, alpha_max=1.0,
                                       alpha_classes=(1.0, 1.0), **common),
                       [{"alpha_classes": (1.0, float(b))} for b in range(1, 6)]),
        "coding_compare": (GeneratorConfig(rmin=10.0, rmax=100.0, alpha_min=1.0, alpha_max=1.0, **common),
                      m_sweep),
    }

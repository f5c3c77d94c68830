"""Problem instances, transmissions, schedules and the shared outcome replay.

Destinations and packets are addressed by position: a request ``(i, j)``
means destination ``destinations[i]`` wants packet ``packets[j]``.  The
original ids are kept only for serialization and error messages.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

EPS = 1e-9

Request = tuple[int, int]


class InstanceTooLarge(ValueError):
    """An exact oracle was asked to solve an instance beyond its size cap."""


def leq(a: float, b: float) -> bool:
    """``a <= b`` with the absolute boundary tolerance used everywhere."""
    return a <= b + EPS


@dataclass(frozen=True)
class Scenario:
    packet_size: float
    packets: tuple
    destinations: tuple
    has: tuple[frozenset[int], ...]
    wants: tuple[frozenset[int], ...]
    deadline: Mapping[Request, float]
    benefit: Mapping[Request, float]
    max_rate: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.packets)

    @property
    def m(self) -> int:
        return len(self.destinations)

    def requests(self) -> list[Request]:
        """All (destination, packet) requests in (i, j) order."""
        return [(i, j) for i in range(self.m) for j in sorted(self.wants[i])]

    def total_benefit(self) -> float:
        return math.fsum(self.benefit[r] for r in self.requests())


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_scenario(s: Scenario) -> ValidationReport:
    report = ValidationReport()
    d_ids, p_ids = s.destinations, s.packets
    if not (s.packet_size > 0):
        report.violations.append(f"non-positive packet size {s.packet_size}")
    if len(set(p_ids)) != len(p_ids):
        report.violations.append("duplicate packet ids")
    if len(set(d_ids)) != len(d_ids):
        report.violations.append("duplicate destination ids")
    for name, seq in (("has", s.has), ("wants", s.wants), ("max_rate", s.max_rate)):
        if len(seq) != s.m:
            report.violations.append(f"{name} has {len(seq)} entries for {s.m} destinations")
    if report.violations:
        return report

    expected = set()
    for i in range(s.m):
        if not (s.max_rate[i] > 0):
            report.violations.append(f"non-positive max rate at {d_ids[i]}")
        for j in sorted(s.has[i] | s.wants[i]):
            if not 0 <= j < s.n:
                report.violations.append(f"unknown packet index {j} at {d_ids[i]}")
        for j in sorted(s.has[i] & s.wants[i]):
            report.violations.append(f"overlap at ({d_ids[i]},{p_ids[j]})")
        expected.update((i, j) for j in s.wants[i])

    for name, table in (("deadline", s.deadline), ("benefit", s.benefit)):
        keys = set(table)
        for i, j in sorted(expected - keys):
            report.violations.append(f"missing {name} at ({d_ids[i]},{p_ids[j]})")
        for key in sorted(keys - expected):
            report.violations.append(f"{name} for non-request {key}")
        for key in sorted(keys & expected):
            if not (table[key] > 0):
                i, j = key
                report.violations.append(f"non-positive {name} at ({d_ids[i]},{p_ids[j]})")

    if not expected:
        report.warnings.append("nothing to schedule")
    return report


@dataclass(frozen=True)
class Transmission:
    coded_set: frozenset[int]
    rate: float
    duration: float
    intended: frozenset[Request]

    @classmethod
    def at_rate(cls, coded: Iterable[int], rate: float, intended: Iterable[Request],
                packet_size: float) -> "Transmission":
        return cls(frozenset(coded), rate, packet_size / rate, frozenset(intended))


@dataclass(frozen=True)
class Schedule:
    transmissions: tuple[Transmission, ...]
    satisfied: frozenset[Request]
    total_benefit: float
    # decode time of every intended request that was received and decoded,
    # on time or not
    decoded_at: Mapping[Request, float] = field(default_factory=dict)

    def start_times(self) -> list[float]:
        out, t = [], 0.0
        for tx in self.transmissions:
            out.append(t)
            t += tx.duration
        return out


def evaluate_schedule(s: Scenario, transmissions: Sequence[Transmission]) -> Schedule:
    """Replay XOR transmissions in order and account for on-time deliveries.

    A request is satisfied when its destination can hear the rate, already
    holds every other packet of the XOR, and the transmission ends no later
    than the deadline.  Decoded packets (late ones too) join the holdings.
    """
    holdings = [set(h) for h in s.has]
    served: set[Request] = set()
    satisfied: set[Request] = set()
    decoded_at: dict[Request, float] = {}
    t = 0.0
    for tx in transmissions:
        unknown = [j for j in tx.coded_set if not 0 <= j < s.n]
        if unknown:
            raise ValueError(f"transmission carries unknown packet indices {sorted(unknown)}")
        if not tx.coded_set:
            raise ValueError("transmission with empty coded set")
        t += tx.duration
        decoded = []
        for i, j in sorted(tx.intended):
            if (i, j) in served:
                raise ValueError(f"request {(i, j)} intended by more than one transmission")
            if not (0 <= i < s.m and j in s.wants[i]):
                raise ValueError(f"intended pair {(i, j)} is not a request")
            served.add((i, j))
            receivable = leq(tx.rate, s.max_rate[i])
            decodable = j in tx.coded_set and (tx.coded_set - {j}) <= holdings[i]
            if receivable and decodable:
                decoded.append((i, j))
                decoded_at[(i, j)] = t
                if leq(t, s.deadline[(i, j)]):
                    satisfied.add((i, j))
        for i, j in decoded:
            holdings[i].add(j)
    total = math.fsum(s.benefit[r] for r in sorted(satisfied))
    return Schedule(tuple(transmissions), frozenset(satisfied), total, decoded_at)


def deadline_miss_ratio(sched: Schedule, s: Scenario) -> float:
    total = len(s.requests())
    if total == 0:
        return 0.0
    return (total - len(sched.satisfied)) / total


# --------------------------------------------------------------------------
# JSON

_TOP_FIELDS = {"packet_size", "packets", "destinations"}
_DEST_FIELDS = {"id", "max_rate", "has", "wants"}
_WANT_FIELDS = {"packet", "deadline", "benefit"}


def _check_fields(obj: dict, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise ValueError(f"{where}: unknown fields {sorted(extra)}")
    missing = allowed - set(obj)
    if missing:
        raise ValueError(f"{where}: missing fields {sorted(missing)}")


def scenario_from_dict(doc: dict) -> Scenario:
    _check_fields(doc, _TOP_FIELDS, "scenario")
    packets = tuple(doc["packets"])
    index = {p: j for j, p in enumerate(packets)}

    def lookup(p, where):
        if p not in index:
            raise ValueError(f"{where}: unknown packet id {p!r}")
        return index[p]

    dests, has, wants, rates = [], [], [], []
    deadline, benefit = {}, {}
    for i, d in enumerate(doc["destinations"]):
        where = f"destinations[{i}]"
        _check_fields(d, _DEST_FIELDS, where)
        dests.append(d["id"])
        rates.append(float(d["max_rate"]))
        has.append(frozenset(lookup(p, where) for p in d["has"]))
        w = set()
        for k, want in enumerate(d["wants"]):
            _check_fields(want, _WANT_FIELDS, f"{where}.wants[{k}]")
            j = lookup(want["packet"], where)
            w.add(j)
            deadline[(i, j)] = float(want["deadline"])
            benefit[(i, j)] = float(want["benefit"])
        wants.append(frozenset(w))
    return Scenario(float(doc["packet_size"]), packets, tuple(dests), tuple(has),
                    tuple(wants), deadline, benefit, tuple(rates))


def scenario_to_dict(s: Scenario) -> dict:
    dests = []
    for i, d in enumerate(s.destinations):
        dests.append({
            "id": d,
            "max_rate": s.max_rate[i],
            "has": [s.packets[j] for j in sorted(s.has[i])],
            "wants": [{"packet": s.packets[j], "deadline": s.deadline[(i, j)],
                       "benefit": s.benefit[(i, j)]} for j in sorted(s.wants[i])],
        })
    return {"packet_size": s.packet_size, "packets": list(s.packets), "destinations": dests}


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh))


def dump_scenario(s: Scenario, path) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(s), fh, indent=2)
        fh.write("\n")


def schedule_to_dict(s: Scenario, sched: Schedule) -> dict:
    txs = []
    for start, tx in zip(sched.start_times(), sched.transmissions):
        txs.append({
            "coded": [s.packets[j] for j in sorted(tx.coded_set)],
            "rate": tx.rate,
            "start": start,
            "end": start + tx.duration,
            "intended": [[s.destinations[i], s.packets[j]] for i, j in sorted(tx.intended)],
        })
    return {
        "transmissions": txs,
        "summary": {
            "total_benefit": sched.total_benefit,
            "miss_ratio": deadline_miss_ratio(sched, s),
            "requests": len(s.requests()),
            "satisfied": [[s.destinations[i], s.packets[j]] for i, j in sorted(sched.satisfied)],
        },
    }

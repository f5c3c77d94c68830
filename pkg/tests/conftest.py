import pytest

ACCEPTANCE: list[str] = []

from rsnc.harness import GeneratorConfig, generate_scenario
from rsnc.model import Scenario


def trio_scenario(benefit=(1.0, 1.0, 1.0), deadlines=(4.0, 7.0, 7.0)) -> Scenario:
    """Three destinations, each missing one packet the others hold.

    B = 10, rates 5 / 2 / 2.  d1 wants p1, d2 wants p2, d3 wants p3.
    """
    reqs = [(0, 0), (1, 1), (2, 2)]
    return Scenario(
        packet_size=10.0,
        packets=("p1", "p2", "p3"),
        destinations=("d1", "d2", "d3"),
        has=(frozenset({1, 2}), frozenset({0, 2}), frozenset({0, 1})),
        wants=(frozenset({0}), frozenset({1}), frozenset({2})),
        deadline=dict(zip(reqs, deadlines)),
        benefit=dict(zip(reqs, benefit)),
        max_rate=(5.0, 2.0, 2.0),
    )


def small_scenario(seed: int, k: int, n=None, m=None, **kw) -> Scenario:
    """Random scenario with 2-4 packets and destinations, tight deadlines."""
    n = n or 2 + (seed + k) % 3
    m = m or 2 + (seed * 7 + k) % 3
    base = dict(n=n, m=m, B=100.0, rmin=10.0, rmax=60.0, Tmin=2.0, Tmax=30.0,
                alpha_min=0.5, alpha_max=3.0, seed=seed, samples=1)
    base.update(kw)
    return generate_scenario(GeneratorConfig(**base), k)


@pytest.fixture
def trio():
    return trio_scenario()


def pairwise_instances(count: int, seed: int = 0, max_cliques: int = 22):
    """Shared-deadline instances small enough for the exhaustive oracle.

    Sizes m, n in 2..5, B = 100, rates 10-100, benefits 1-10, T in 5-35.
    """
    import numpy as np

    from rsnc.pairwise import enumerate_pairwise

    rng = np.random.default_rng(seed)
    out = []
    k = 0
    while len(out) < count:
        m, n = (int(x) for x in rng.integers(2, 6, 2))
        T = float(rng.uniform(5.0, 35.0))
        cfg = GeneratorConfig(n=n, m=m, B=100.0, rmin=10.0, rmax=100.0, alpha_min=1.0,
                              alpha_max=10.0, common_deadline=T, seed=seed, samples=1)
        inst = enumerate_pairwise(generate_scenario(cfg, k), T)
        k += 1
        if 0 < len(inst) <= max_cliques:
            out.append(inst)
    return out


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)

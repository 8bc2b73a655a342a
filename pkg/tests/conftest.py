import random

import pytest
from hypothesis import strategies as st

from buchi.automata import ExplicitGBA, explicit_provider
from buchi.generators import GenConfig, random_gba


def gba(n, edges, acc=None, k=1, init=0):
    """Small helper: ``edges`` is a list of (u, v), ``acc`` maps state -> mask."""
    succ = [[] for _ in range(n)]
    for u, v in edges:
        succ[u].append(v)
    masks = [0] * n
    for s, m in (acc or {}).items():
        masks[s] = m
    return ExplicitGBA(n, init, succ, masks, k)


def chain_with_sink():
    """0 -> 1 -> ... -> 8 (all accepting) -> 9, where 9 is a non-accepting sink loop."""
    edges = [(i, i + 1) for i in range(9)] + [(9, 9)]
    return gba(10, edges, {i: 1 for i in range(9)})


@st.composite
def gbas(draw, max_n=12, k=None, max_k=3):
    n = draw(st.integers(1, max_n))
    kk = draw(st.integers(0, max_k)) if k is None else k
    succ = []
    for _ in range(n):
        row = draw(st.lists(st.integers(0, n - 1), max_size=min(n, 4), unique=True))
        succ.append(row)
    acc = draw(st.lists(st.integers(0, (1 << kk) - 1), min_size=n, max_size=n))
    return ExplicitGBA(n, 0, succ, acc, kk)


def random_instances(count, seed=0, n_max=40, k_choices=(0, 1, 1, 1, 2, 3)):
    rng = random.Random(seed)
    for i in range(count):
        k = rng.choice(k_choices)
        yield random_gba(GenConfig(
            n=rng.randint(1, n_max),
            avg_out_degree=rng.uniform(0.5, 3.0),
            k=k,
            acc_density=rng.uniform(0.0, 0.5),
            seed=seed * 100_000 + i,
        ))


@pytest.fixture
def self_loop():
    return gba(1, [(0, 0)], {0: 1})


@pytest.fixture
def provider():
    return explicit_provider


# one "criterion N: PASS/FAIL ..." line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

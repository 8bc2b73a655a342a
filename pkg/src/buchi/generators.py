"""Seeded automaton generators: random GBAs and structural patterns."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .automata import ExplicitGBA, scc_decompose
from .errors import ConfigError, ContractError


@dataclass(frozen=True)
class GenConfig:
    n: int
    avg_out_degree: float = 2.0
    k: int = 1
    acc_density: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.avg_out_degree < 0:
            raise ConfigError("avg_out_degree must be >= 0")
        if not 0.0 <= self.acc_density <= 1.0:
            raise ConfigError("acc_density must lie in [0, 1]")
        if self.k < 0:
            raise ConfigError("k must be >= 0")

    def to_json(self):
        return asdict(self)


def _out_degree(rng: random.Random, mean: float, cap: int) -> int:
    # geometric on {0, 1, ...} with the requested mean
    if mean <= 0:
        return 0
    p = 1.0 / (1.0 + mean)
    d = 0
    while rng.random() >= p and d < cap:
        d += 1
    return d


def _random_graph(rng: random.Random, n: int, mean: float) -> list[list[int]]:
    succ = []
    for _ in range(n):
        d = _out_degree(rng, mean, n)
        succ.append(rng.sample(range(n), d))
    return succ


def random_gba(c: GenConfig) -> ExplicitGBA:
    rng = random.Random(c.seed)
    succ = _random_graph(rng, c.n, c.avg_out_degree)
    acc = []
    for _ in range(c.n):
        mask = 0
        for j in range(c.k):
            if rng.random() < c.acc_density:
                mask |= 1 << j
        acc.append(mask)
    return ExplicitGBA(c.n, 0, succ, acc, c.k)


def weak_random(c: GenConfig) -> ExplicitGBA:
    """Random graph with acceptance decided per SCC, so the result is weak."""
    if c.k != 1:
        raise ContractError("weak_random generates Büchi automata (k=1)")
    rng = random.Random(c.seed)
    succ = _random_graph(rng, c.n, c.avg_out_degree)
    g = ExplicitGBA(c.n, 0, succ, [0] * c.n, 1)
    for comp in scc_decompose(g):
        flag = 1 if rng.random() < c.acc_density else 0
        for s in comp.states:
            g.acc[s] = flag
    return g


def gen_trivial_accepting(n_sys: int, seed: int = 0, empty: bool = True,
                          extra_edges: float = 1.0) -> ExplicitGBA:
    """Acyclic system of accepting states feeding a looping sink.

    States ``0 .. n_sys-1`` are accepting and form a DAG (every state has an
    in-edge from a smaller one, so all are reachable; ``extra_edges`` more
    forward edges per state on average).  State ``n_sys`` is a sink with a
    self-loop, accepting only when ``empty`` is false.  Every DAG state is a
    trivial accepting SCC, as in products with a GF p style property.
    """
    if n_sys < 2:
        raise ConfigError("n_sys must be >= 2")
    rng = random.Random(seed)
    n = n_sys + 1
    sink = n_sys
    succ = [[] for _ in range(n)]
    for v in range(1, n_sys):
        succ[rng.randrange(v)].append(v)
    for u in range(n_sys - 1):
        for _ in range(_out_degree(rng, extra_edges, n_sys)):
            v = rng.randrange(u + 1, n_sys)
            if v not in succ[u]:
                succ[u].append(v)
    # the DAG's last state always reaches the sink, others sometimes
    succ[n_sys - 1].append(sink)
    for u in range(n_sys - 1):
        if rng.random() < 0.3:
            succ[u].append(sink)
    for row in succ[:n_sys]:
        rng.shuffle(row)
    succ[sink].append(sink)
    acc = [1] * n_sys + [0 if empty else 1]
    return ExplicitGBA(n, 0, succ, acc, 1)


def gen_nonacc_scc_chain(n_sccs: int, scc_size: int, seed: int = 0,
                         chords: float = 0.5) -> ExplicitGBA:
    """A chain of non-trivial, non-accepting SCCs; the automaton is empty.

    Each SCC is a ring (a self-loop when ``scc_size`` is 1) plus random
    chords; one edge leads from each SCC to the next.
    """
    if n_sccs < 1 or scc_size < 1:
        raise ConfigError("n_sccs and scc_size must be >= 1")
    rng = random.Random(seed)
    n = n_sccs * scc_size
    succ = [[] for _ in range(n)]
    for c in range(n_sccs):
        base = c * scc_size
        for i in range(scc_size):
            succ[base + i].append(base + (i + 1) % scc_size)
        if scc_size > 2:
            for i in range(scc_size):
                if rng.random() < chords:
                    t = base + rng.randrange(scc_size)
                    if t not in succ[base + i]:
                        succ[base + i].append(t)
        if c + 1 < n_sccs:
            u = base + rng.randrange(scc_size)
            succ[u].append((c + 1) * scc_size + rng.randrange(scc_size))
    for row in succ:
        rng.shuffle(row)
    return ExplicitGBA(n, 0, succ, [0] * n, 1)


def gen_gba_ring(n: int) -> ExplicitGBA:
    """k=2 ring whose last state is in A_1 only; empty.

    Degeneralizing it doubles the reachable state space: the copy waiting for
    ``A_1`` is left at the last state and the copy waiting for ``A_2`` is
    never left again.
    """
    if n < 1:
        raise ConfigError("n must be >= 1")
    succ = [[(i + 1) % n] for i in range(n)]
    acc = [0] * n
    acc[n - 1] = 0b01
    return ExplicitGBA(n, 0, succ, acc, 2)


GENERATORS = {
    "random": "random_gba",
    "weak": "weak_random",
    "trivial-accepting": "gen_trivial_accepting",
    "nonacc-chain": "gen_nonacc_scc_chain",
    "gba-ring": "gen_gba_ring",
}


def generate(kind: str, **params) -> ExplicitGBA:
    """Dispatch by generator name with string or typed keyword parameters."""
    conv = {"n": int, "k": int, "seed": int, "avg_out_degree": float,
            "acc_density": float, "n_sys": int, "n_sccs": int, "scc_size": int,
            "extra_edges": float, "chords": float}
    typed = {}
    for key, val in params.items():
        key = key.replace("-", "_")
        if key == "empty":
            typed[key] = val if isinstance(val, bool) else str(val).lower() in ("1", "true", "yes")
        elif key in conv:
            typed[key] = conv[key](val)
        else:
            raise ConfigError(f"unknown generator parameter {key!r}")
    try:
        if kind == "random":
            return random_gba(GenConfig(**typed))
        if kind == "weak":
            return weak_random(GenConfig(**typed))
        if kind == "trivial-accepting":
            return gen_trivial_accepting(**typed)
        if kind == "nonacc-chain":
            return gen_nonacc_scc_chain(**typed)
        if kind == "gba-ring":
            return gen_gba_ring(**typed)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {kind}: {exc}") from None
    raise ConfigError(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")

"""Benchmark harness, single checks and randomized differential testing."""

from __future__ import annotations

import random
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .automata import (
    AutomatonProvider,
    ExplicitGBA,
    Verdict,
    explicit_provider,
    is_weak,
)
from .bitstate import bitstate_check
from .errors import ConfigError, ContractError
from .formats import format_gba, load_gba
from .generators import GenConfig, generate, random_gba
from .kernels import ALGORITHMS, run_algorithm
from .metrics import Metrics
from .oracle import oracle_emptiness, validate_lasso
from .product import LabeledGBA, KripkeStructure, load_kripke, load_labeled_gba, product_provider

SCHEMA = 1
CHECK_ALGORITHMS = ALGORITHMS + ("bitstate-and", "bitstate-sd")


# -- instances ---------------------------------------------------------------

@dataclass
class Instance:
    """A checkable input: an explicit automaton or a Kripke/property pair."""

    name: str
    gba: ExplicitGBA | None = None
    kripke: KripkeStructure | None = None
    prop: LabeledGBA | None = None

    def __post_init__(self):
        if self.gba is None and (self.kripke is None or self.prop is None):
            raise ConfigError("an instance needs an automaton or a Kripke/property pair")

    def provider(self) -> AutomatonProvider:
        if self.gba is not None:
            return explicit_provider(self.gba)
        return product_provider(self.kripke, self.prop)

    @property
    def conditions(self) -> int:
        return self.gba.k if self.gba is not None else self.prop.gba.k

    def weak(self) -> bool:
        """Weakness of the input; a product with a weak property is weak."""
        if self.conditions != 1:
            return False
        return is_weak(self.gba if self.gba is not None else self.prop.gba)


def _resolve(path, base):
    p = Path(path)
    if base is not None and not p.is_absolute():
        p = Path(base) / p
    if not p.exists():
        raise ConfigError(f"file not found: {p}")
    return p


def gen_params(tokens) -> dict:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ConfigError(f"generator parameter {tok!r} is not key=value")
        key, val = tok.split("=", 1)
        out[key] = val
    return out


def parse_instance(line: str, base=None) -> Instance:
    """One suite line: ``gba PATH``, ``product KRIPKE PROP`` or ``gen KIND k=v ...``."""
    tokens = shlex.split(line)
    if not tokens:
        raise ConfigError("empty instance spec")
    kind, args = tokens[0], tokens[1:]
    if kind in ("gba", "ba") and len(args) == 1:
        g = load_gba(_resolve(args[0], base))
        if kind == "ba" and g.k != 1:
            raise ContractError(f"{args[0]}: expected a Büchi automaton (k=1), got k={g.k}")
        return Instance(args[0], gba=g)
    if kind == "product" and len(args) == 2:
        m = load_kripke(_resolve(args[0], base))
        a = load_labeled_gba(_resolve(args[1], base))
        return Instance(f"{args[0]}x{args[1]}", kripke=m, prop=a)
    if kind == "gen" and args:
        return Instance(" ".join(tokens), gba=generate(args[0], **gen_params(args[1:])))
    raise ConfigError(f"bad instance spec {line!r}")


def load_suite(path) -> list[Instance]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"suite file not found: {path}")
    out = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_instance(line, base=path.parent))
    return out


# -- single checks -----------------------------------------------------------

def run_check(inst: Instance, algo: str, bits=20, runs=1, seed=0, backend=None,
              trace=None) -> tuple[Verdict, Metrics]:
    """Run one emptiness check on ``inst``.

    SD (exact or bitstate) is refused on inputs that are not weak, GV and the
    nested searches on inputs with k != 1.
    """
    if algo not in CHECK_ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algo!r}; choose from {', '.join(CHECK_ALGORITHMS)}")
    if algo in ("sd", "bitstate-sd") and not inst.weak():
        raise ContractError("sd requires a weak Büchi automaton; this input is not weak")
    p = inst.provider()
    if algo.startswith("bitstate-"):
        return bitstate_check(p, algo.split("-", 1)[1], bits=bits, runs=runs, seed=seed, trace=trace)
    return run_algorithm(p, algo, backend=backend, trace=trace)


# -- benchmark ---------------------------------------------------------------

@dataclass
class BenchReport:
    algorithms: list[str]
    instances: list[str]
    cells: dict = field(default_factory=dict)  # (instance, algo) -> (Verdict, Metrics)
    baseline: str | None = None
    metric: str = "post_calls"

    def totals(self, metric=None) -> dict[str, float]:
        metric = metric or self.metric
        out = {a: 0 for a in self.algorithms}
        for (_, algo), (_, m) in self.cells.items():
            out[algo] += getattr(m, metric)
        return out

    def table(self, metric=None, baseline=None) -> list[tuple[str, float]]:
        return percentage_table(self.totals(metric), baseline or self.baseline)

    def format_table(self, metric=None, baseline=None) -> str:
        return format_table(self.table(metric, baseline))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "metric": self.metric,
            "baseline": _pick_baseline(self.algorithms, self.baseline),
            "rows": [
                {"instance": inst, "algorithm": algo, "verdict": v.kind, "metrics": m.to_json()}
                for (inst, algo), (v, m) in self.cells.items()
            ],
            "table": [{"algorithm": a, "percent": pct} for a, pct in self.table()],
        }


def _pick_baseline(names, baseline):
    if baseline is not None:
        if baseline not in names:
            raise ConfigError(f"baseline {baseline!r} is not among {', '.join(names)}")
        return baseline
    return "baseline" if "baseline" in names else names[0]


def percentage_table(totals: dict[str, float], baseline=None) -> list[tuple[str, float]]:
    """Totals as percentages of ``baseline``, rounded to one decimal, ascending."""
    if not totals:
        return []
    names = list(totals)
    base = _pick_baseline(names, baseline)
    ref = totals[base]
    rows = []
    for name in names:
        if ref:
            pct = round(100.0 * totals[name] / ref, 1)
        else:
            pct = 100.0 if totals[name] == 0 else float("inf")
        rows.append((name, pct))
    rows.sort(key=lambda r: (r[1], r[0]))
    return rows


def format_table(rows) -> str:
    width = max((len(a) for a, _ in rows), default=0)
    return "\n".join(f"{a:<{width}}  {pct:6.1f} %" for a, pct in rows)


def run_bench(suite: list[Instance], algorithms, baseline=None, metric="post_calls",
              backend=None, workers=1, **check_opts) -> BenchReport:
    """Run every algorithm on every instance; each cell is independent."""
    algorithms = list(algorithms)
    if not algorithms:
        raise ConfigError("no algorithms selected")
    for a in algorithms:
        if a not in CHECK_ALGORITHMS:
            raise ConfigError(f"unknown algorithm {a!r}")
    if metric not in Metrics.COUNTERS + ("wall_time",):
        raise ConfigError(f"unknown metric {metric!r}")
    _pick_baseline(algorithms, baseline)
    names = []
    for i, inst in enumerate(suite):
        if any(a in ("gv", "sd", "and", "baseline") or a.startswith("bitstate") for a in algorithms) \
                and inst.conditions != 1:
            raise ContractError(f"instance {inst.name!r} has k={inst.conditions}; "
                                f"the selected algorithms need k=1")
        names.append(inst.name if inst.name not in names else f"{inst.name}#{i}")
    report = BenchReport(algorithms, names, baseline=baseline, metric=metric)
    jobs = [(name, inst, a) for name, inst in zip(names, suite) for a in algorithms]

    def cell(job):
        name, inst, a = job
        return (name, a), run_check(inst, a, backend=backend, **check_opts)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(cell, jobs))
    else:
        results = [cell(j) for j in jobs]
    for key, val in results:
        report.cells[key] = val
    return report


# -- differential testing ------------------------------------------------------

DEFAULT_RANGES = {
    "n": (1, 50),
    "k": (0, 3),
    "avg_out_degree": (0.5, 3.0),
    "acc_density": (0.0, 0.5),
}

Checker = Callable[[AutomatonProvider], tuple]


@dataclass
class Failure:
    seed: int
    algorithm: str
    reason: str
    instance: str
    path: str | None = None


@dataclass
class DiffSummary:
    count: int = 0
    runs: int = 0
    nonempty: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "count": self.count,
            "runs": self.runs,
            "nonempty": self.nonempty,
            "passed": self.passed,
            "failures": [f.__dict__ for f in self.failures],
        }


def random_config(rng: random.Random, ranges=None, seed=0) -> GenConfig:
    r = dict(DEFAULT_RANGES)
    r.update(ranges or {})
    return GenConfig(
        n=rng.randint(*r["n"]),
        k=rng.randint(*r["k"]),
        avg_out_degree=rng.uniform(*r["avg_out_degree"]),
        acc_density=rng.uniform(*r["acc_density"]),
        seed=seed,
    )


def _applicable(g: ExplicitGBA, algorithms) -> dict:
    out = {}
    for name, fn in algorithms.items():
        if name in ("and", "baseline", "gv") and g.k != 1:
            continue
        if name == "sd" and (g.k != 1 or not is_weak(g)):
            continue
        out[name] = fn
    return out


def _disagreement(g: ExplicitGBA, fn) -> str | None:
    p = explicit_provider(g)
    want = oracle_emptiness(g)
    try:
        got, _ = fn(p)
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        return f"raised {type(exc).__name__}: {exc}"
    if got.is_counterexample != want.is_counterexample:
        return f"verdict {got.kind}, oracle says {want.kind}"
    if got.is_counterexample and not validate_lasso(p, got):
        return "counterexample does not validate"
    return None


def _drop_state(g: ExplicitGBA, x: int) -> ExplicitGBA | None:
    if x == g.init or g.n == 1:
        return None
    remap = [i if i < x else i - 1 for i in range(g.n)]
    succ = [[remap[t] for t in row if t != x] for s, row in enumerate(g.succ) if s != x]
    acc = [a for s, a in enumerate(g.acc) if s != x]
    return ExplicitGBA(g.n - 1, remap[g.init], succ, acc, g.k)


def minimize(g: ExplicitGBA, fails: Callable[[ExplicitGBA], bool]) -> ExplicitGBA:
    """Greedy state and edge deletion keeping ``fails`` true."""
    changed = True
    while changed:
        changed = False
        for x in range(g.n - 1, -1, -1):
            h = _drop_state(g, x) if x < g.n else None
            if h is not None and fails(h):
                g, changed = h, True
        for s in range(g.n):
            for t in list(g.succ[s]):
                h = g.copy()
                h.succ[s].remove(t)
                if fails(h):
                    g, changed = h, True
        for s in range(g.n):
            if g.acc[s]:
                h = g.copy()
                h.acc[s] = 0
                if fails(h):
                    g, changed = h, True
    return g


def default_checkers(backend=None) -> dict[str, Checker]:
    def make(a):
        return lambda p: run_algorithm(p, a, backend=backend)
    return {a: make(a) for a in ALGORITHMS}


def run_differential(count: int, ranges=None, seed=0, algorithms=None, out_dir=None,
                     minimize_failures=True, backend=None) -> DiffSummary:
    """Compare every applicable algorithm with the oracle on random instances.

    ``algorithms`` maps names to callables ``provider -> (Verdict, Metrics)``;
    the names ``and``, ``baseline``, ``gv`` and ``sd`` are only run where their
    input contract holds.  Failing instances are shrunk and, if ``out_dir`` is
    given, written there in the automaton text format.
    """
    summary = DiffSummary(count=count)
    if count <= 0:
        return summary
    algorithms = algorithms or default_checkers(backend)
    rng = random.Random(seed)
    for i in range(count):
        inst_seed = rng.randrange(2**31)
        g = random_gba(random_config(rng, ranges, inst_seed))
        want = oracle_emptiness(g)
        summary.nonempty += want.is_counterexample
        for name, fn in _applicable(g, algorithms).items():
            summary.runs += 1
            reason = _disagreement(g, fn)
            if reason is None:
                continue
            small = g
            if minimize_failures:
                small = minimize(g, lambda h, fn=fn: _disagreement(h, fn) is not None)
                reason = _disagreement(small, fn) or reason
            text = format_gba(small, f"{name}: {reason} (seed {inst_seed})")
            path = None
            if out_dir is not None:
                Path(out_dir).mkdir(parents=True, exist_ok=True)
                path = str(Path(out_dir) / f"fail-{name}-{inst_seed}.gba")
                Path(path).write_text(text)
            summary.failures.append(Failure(inst_seed, name, reason, text, path))
    return summary

"""Kripke structures, guard-labelled automata and the lazy product provider."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .automata import AutomatonProvider, ExplicitGBA
from .errors import FormatError, GuardSyntaxError
from .formats import _GraphBuilder, to_int, tokenize
from .guards import TRUE, GuardExpr, IDENT, eval_guard, format_guard, parse_guard


@dataclass
class KripkeStructure:
    n: int
    init: int
    succ: list[list[int]]
    labels: list[frozenset[str]]

    def __post_init__(self):
        if self.n < 1:
            raise FormatError("Kripke structure needs at least one state")
        if not 0 <= self.init < self.n:
            raise FormatError(f"initial state {self.init} out of range")
        if len(self.succ) != self.n or len(self.labels) != self.n:
            raise FormatError("succ/labels tables must have n entries")
        for s, row in enumerate(self.succ):
            if len(set(row)) != len(row):
                raise FormatError(f"duplicate successor in list of state {s}")
            if any(not 0 <= t < self.n for t in row):
                raise FormatError(f"edge from {s} leaves the state range")
        for props in self.labels:
            for name in props:
                if not IDENT.match(name) or name in ("true", "false"):
                    raise FormatError(f"bad proposition name {name!r}")


@dataclass
class LabeledGBA:
    """An explicit GBA whose edges carry guards (``guards[s][i]`` labels
    the edge ``s -> gba.succ[s][i]``)."""

    gba: ExplicitGBA
    guards: list[list[GuardExpr]] = field(default=None)

    def __post_init__(self):
        if self.guards is None:
            self.guards = [[TRUE] * len(row) for row in self.gba.succ]
        if [len(r) for r in self.guards] != [len(r) for r in self.gba.succ]:
            raise FormatError("every edge needs exactly one guard")


class ProductProvider(AutomatonProvider):
    """Synchronous product ``m x a`` computed on demand.

    A step ``(u, q) -> (u', q')`` needs an edge ``u -> u'`` of ``m`` and an
    edge ``q -> q'`` of ``a`` whose guard holds on the labels of ``u'``.
    Descriptors are two 4-byte big-endian state ids.
    """

    def __init__(self, m: KripkeStructure, a: LabeledGBA):
        self.m = m
        self.a = a
        # which Kripke states had their labels inspected (laziness audit)
        self.labels_read: set[int] = set()

    @staticmethod
    def encode(u: int, q: int) -> bytes:
        return u.to_bytes(4, "big") + q.to_bytes(4, "big")

    @staticmethod
    def decode(desc: bytes) -> tuple[int, int]:
        return int.from_bytes(desc[:4], "big"), int.from_bytes(desc[4:], "big")

    def initial(self):
        return self.encode(self.m.init, self.a.gba.init)

    def post(self, state):
        u, q = self.decode(state)
        a_succ = self.a.gba.succ[q]
        guards = self.a.guards[q]
        out = []
        if not a_succ:
            return out
        for u2 in self.m.succ[u]:
            props = self.m.labels[u2]
            self.labels_read.add(u2)
            for q2, guard in zip(a_succ, guards):
                if eval_guard(guard, props):
                    out.append(self.encode(u2, q2))
        return out

    def acceptance(self, state):
        return self.a.gba.acc[self.decode(state)[1]]

    def conditions(self):
        return self.a.gba.k

    def describe(self, state):
        return list(self.decode(state))


def product_provider(m: KripkeStructure, a: LabeledGBA) -> ProductProvider:
    return ProductProvider(m, a)


def eager_product(m: KripkeStructure, a: LabeledGBA) -> tuple[ExplicitGBA, list[tuple[int, int]]]:
    """Materialize every pair ``(u, q)`` and the step relation up front.

    Independent of :class:`ProductProvider`; the explicit automaton has
    ``m.n * a.n`` states numbered ``u * a.n + q``.
    """
    g = a.gba
    n = m.n * g.n
    succ = [[] for _ in range(n)]
    acc = [0] * n
    pairs = []
    for u in range(m.n):
        for q in range(g.n):
            s = u * g.n + q
            pairs.append((u, q))
            acc[s] = g.acc[q]
            for u2 in m.succ[u]:
                for q2, guard in zip(g.succ[q], a.guards[q]):
                    if eval_guard(guard, m.labels[u2]):
                        succ[s].append(u2 * g.n + q2)
    return ExplicitGBA(n, m.init * g.n + g.init, succ, acc, g.k), pairs


# -- file formats --------------------------------------------------------------

def parse_kripke(text: str, source=None) -> KripkeStructure:
    n = init = None
    succ = labels = None
    for lineno, tokens in tokenize(text, source):
        kw, args = tokens[0], tokens[1:]
        if kw == "kripke":
            if n is not None:
                raise FormatError("duplicate header", lineno, source)
            if len(args) != 1:
                raise FormatError("usage: kripke <n>", lineno, source)
            n = to_int(args[0], lineno, source)
            if n < 1:
                raise FormatError("Kripke structure needs at least one state", lineno, source)
            succ = [[] for _ in range(n)]
            labels = [set() for _ in range(n)]
            continue
        if n is None:
            raise FormatError("missing header line", lineno, source)

        def state(tok):
            s = to_int(tok, lineno, source, "state")
            if s >= n:
                raise FormatError(f"state {s} out of range (n={n})", lineno, source)
            return s

        if kw == "init":
            if len(args) != 1:
                raise FormatError("usage: init <s>", lineno, source)
            if init is not None:
                raise FormatError("duplicate init line", lineno, source)
            init = state(args[0])
        elif kw == "label":
            if not args:
                raise FormatError("usage: label <s> <ident>...", lineno, source)
            s = state(args[0])
            for name in args[1:]:
                if not IDENT.match(name) or name in ("true", "false"):
                    raise FormatError(f"bad proposition name {name!r}", lineno, source)
                labels[s].add(name)
        elif kw == "edge":
            if len(args) != 2:
                raise FormatError("usage: edge <u> <v>", lineno, source)
            u, v = state(args[0]), state(args[1])
            if v in succ[u]:
                raise FormatError(f"duplicate edge {u}->{v}", lineno, source)
            succ[u].append(v)
        else:
            raise FormatError(f"unknown keyword {kw!r}", lineno, source)
    if n is None:
        raise FormatError("empty Kripke file", None, source)
    if init is None:
        raise FormatError("missing init line", None, source)
    return KripkeStructure(n, init, succ, [frozenset(l) for l in labels])


def format_kripke(m: KripkeStructure) -> str:
    lines = [f"kripke {m.n}", f"init {m.init}"]
    for s, props in enumerate(m.labels):
        if props:
            lines.append(f"label {s} " + " ".join(sorted(props)))
    for s, row in enumerate(m.succ):
        lines.extend(f"edge {s} {t}" for t in row)
    return "\n".join(lines) + "\n"


def parse_labeled_gba(text: str, source=None) -> LabeledGBA:
    """Core automaton format where ``edge <u> <v> [guard]`` may carry a guard.

    A missing guard means ``true``; quote guards that contain spaces.
    """
    b = _GraphBuilder(source)
    for lineno, tokens in tokenize(text, source):
        if b.line(lineno, tokens):
            continue
        if tokens[0] != "edge":
            raise FormatError(f"unknown keyword {tokens[0]!r}", lineno, source)
        b.need_header(lineno)
        if len(tokens) < 3:
            raise FormatError("usage: edge <u> <v> [guard]", lineno, source)
        text_guard = " ".join(tokens[3:]) if len(tokens) > 3 else "true"
        try:
            guard = parse_guard(text_guard)
        except GuardSyntaxError as exc:
            raise FormatError(f"bad guard: {exc}", lineno, source) from None
        b.add_edge(b.state(tokens[1], lineno), b.state(tokens[2], lineno), lineno, guard)
    g = b.finish()
    return LabeledGBA(g, [list(row) for row in b.extra])


def format_labeled_gba(a: LabeledGBA) -> str:
    g = a.gba
    lines = [f"gba {g.n} {g.k}", f"init {g.init}"]
    for s in range(g.n):
        for j in range(1, g.k + 1):
            if g.acc[s] >> (j - 1) & 1:
                lines.append(f"acc {s} {j}")
    for s, row in enumerate(g.succ):
        for t, guard in zip(row, a.guards[s]):
            lines.append(f'edge {s} {t} "{format_guard(guard)}"')
    return "\n".join(lines) + "\n"


def load_kripke(path) -> KripkeStructure:
    path = Path(path)
    return parse_kripke(path.read_text(), source=str(path))


def load_labeled_gba(path) -> LabeledGBA:
    path = Path(path)
    return parse_labeled_gba(path.read_text(), source=str(path))

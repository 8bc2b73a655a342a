"""Core automaton types: descriptors, interning, explicit GBAs and providers.

Acceptance sets are plain ``int`` bitmasks: condition ``j`` (1-based) is bit
``j - 1``.  A plain Büchi automaton is a GBA with ``k == 1``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityError, ContractError, FormatError

StateDescriptor = bytes

_STATE_WIDTH = 4


def encode_state(index: int) -> StateDescriptor:
    return index.to_bytes(_STATE_WIDTH, "big")


def decode_state(desc: StateDescriptor) -> int:
    return int.from_bytes(desc, "big")


# -- acceptance sets ---------------------------------------------------------

def acc_mask(indices: Iterable[int]) -> int:
    mask = 0
    for j in indices:
        if j < 1:
            raise ValueError(f"acceptance index must be >= 1, got {j}")
        mask |= 1 << (j - 1)
    return mask


def acc_indices(mask: int) -> frozenset[int]:
    out = set()
    j = 1
    while mask:
        if mask & 1:
            out.add(j)
        mask >>= 1
        j += 1
    return frozenset(out)


def full_mask(k: int) -> int:
    return (1 << k) - 1


# -- interning ---------------------------------------------------------------

class InternStore:
    """Maps descriptors to dense indices in discovery order."""

    def __init__(self, capacity: int | None = None):
        self.capacity = capacity
        self._index: dict[bytes, int] = {}
        self._descs: list[bytes] = []

    def intern(self, desc: StateDescriptor) -> tuple[int, bool]:
        ref = self._index.get(desc)
        if ref is not None:
            return ref, False
        if self.capacity is not None and len(self._descs) >= self.capacity:
            raise CapacityError(f"intern store full ({self.capacity} states)")
        ref = len(self._descs)
        self._index[desc] = ref
        self._descs.append(desc)
        return ref, True

    def lookup(self, desc: StateDescriptor) -> int | None:
        return self._index.get(desc)

    def descriptor(self, ref: int) -> StateDescriptor:
        return self._descs[ref]

    def __len__(self) -> int:
        return len(self._descs)

    def __contains__(self, desc) -> bool:
        return desc in self._index

    def total_bytes(self) -> int:
        return sum(len(d) for d in self._descs)


# -- explicit automata -------------------------------------------------------

@dataclass
class ExplicitGBA:
    n: int
    init: int
    succ: list[list[int]]
    acc: list[int]
    k: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise FormatError("automaton needs at least one state")
        if not 0 <= self.init < self.n:
            raise FormatError(f"initial state {self.init} out of range")
        if self.k < 0:
            raise FormatError("condition count must be >= 0")
        if len(self.succ) != self.n or len(self.acc) != self.n:
            raise FormatError("succ/acc tables must have n entries")
        limit = full_mask(self.k)
        for s, row in enumerate(self.succ):
            if len(set(row)) != len(row):
                raise FormatError(f"duplicate successor in list of state {s}")
            for t in row:
                if not 0 <= t < self.n:
                    raise FormatError(f"edge {s}->{t} leaves the state range")
            if self.acc[s] & ~limit:
                raise FormatError(f"state {s} uses an acceptance index above k={self.k}")

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.succ)

    def edges(self):
        for s, row in enumerate(self.succ):
            for t in row:
                yield s, t

    def copy(self) -> "ExplicitGBA":
        return ExplicitGBA(self.n, self.init, [list(r) for r in self.succ], list(self.acc), self.k)

    def reachable(self) -> list[int]:
        """States reachable from ``init`` in BFS order."""
        seen = [False] * self.n
        seen[self.init] = True
        order = [self.init]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in self.succ[s]:
                if not seen[t]:
                    seen[t] = True
                    order.append(t)
                    queue.append(t)
        return order

    def csr(self):
        """(indptr, indices) adjacency arrays, successor order preserved."""
        indptr = [0]
        indices = []
        for row in self.succ:
            indices.extend(row)
            indptr.append(len(indices))
        return indptr, indices


# -- providers ---------------------------------------------------------------

class AutomatonProvider(ABC):
    """On-the-fly access to an automaton.

    ``post`` must return the same successors in the same order on every call.
    """

    @abstractmethod
    def initial(self) -> StateDescriptor: ...

    @abstractmethod
    def post(self, state: StateDescriptor) -> Sequence[StateDescriptor]: ...

    @abstractmethod
    def acceptance(self, state: StateDescriptor) -> int: ...

    @abstractmethod
    def conditions(self) -> int: ...

    def describe(self, state: StateDescriptor):
        """JSON-friendly rendering of a state for reports and traces."""
        return state.hex()


class ExplicitProvider(AutomatonProvider):
    def __init__(self, g: ExplicitGBA):
        self.g = g
        self._descs = [encode_state(i) for i in range(g.n)]
        self._post = [tuple(self._descs[t] for t in row) for row in g.succ]

    def initial(self):
        return self._descs[self.g.init]

    def post(self, state):
        return self._post[decode_state(state)]

    def acceptance(self, state):
        return self.g.acc[decode_state(state)]

    def conditions(self):
        return self.g.k

    def describe(self, state):
        return decode_state(state)


def explicit_provider(g: ExplicitGBA) -> ExplicitProvider:
    return ExplicitProvider(g)


def materialize(p: AutomatonProvider, capacity: int | None = None):
    """Explore ``p`` completely; return the explicit GBA and its descriptor list.

    States are numbered in BFS discovery order, so the initial state is 0.
    """
    store = InternStore(capacity)
    store.intern(p.initial())
    succ: list[list[int]] = []
    acc: list[int] = []
    i = 0
    while i < len(store):
        d = store.descriptor(i)
        row = []
        for t in p.post(d):
            ref, _ = store.intern(t)
            row.append(ref)
        succ.append(row)
        acc.append(p.acceptance(d))
        i += 1
    g = ExplicitGBA(len(store), 0, succ, acc, p.conditions())
    return g, [store.descriptor(i) for i in range(len(store))]


# -- verdicts ----------------------------------------------------------------

EMPTY = "empty"
PROBABLY_EMPTY = "probably-empty"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class Verdict:
    kind: str
    prefix: tuple = ()
    loop: tuple = ()
    flags: tuple = field(default=(), compare=False)

    @classmethod
    def empty(cls, flags=()):
        return cls(EMPTY, flags=tuple(flags))

    @classmethod
    def counterexample(cls, prefix, loop, flags=()):
        if not loop:
            raise ValueError("a counterexample needs a non-empty loop")
        return cls(COUNTEREXAMPLE, tuple(prefix), tuple(loop), tuple(flags))

    @property
    def is_counterexample(self) -> bool:
        return self.kind == COUNTEREXAMPLE

    @property
    def is_empty(self) -> bool:
        return self.kind in (EMPTY, PROBABLY_EMPTY)

    def with_flags(self, *flags) -> "Verdict":
        return Verdict(self.kind, self.prefix, self.loop, self.flags + tuple(flags))

    def to_json(self, describe=None) -> dict:
        out = {"kind": self.kind}
        if self.is_counterexample:
            show = describe or (lambda d: d.hex() if isinstance(d, bytes) else d)
            out["prefix"] = [show(s) for s in self.prefix]
            out["loop"] = [show(s) for s in self.loop]
        if self.flags:
            out["flags"] = list(self.flags)
        return out


# -- offline analysis ----------------------------------------------------------

@dataclass(frozen=True)
class SCC:
    states: tuple[int, ...]
    nontrivial: bool


def scc_decompose(g: ExplicitGBA) -> list[SCC]:
    """Maximal SCCs of the reachable part, in topological order.

    If SCC ``C1`` reaches ``C2`` then ``C1`` comes first.  Iterative Tarjan.
    """
    index = [0] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    found: list[SCC] = []
    counter = 1
    index[g.init] = low[g.init] = counter
    stack.append(g.init)
    on_stack[g.init] = True
    work = [(g.init, 0)]
    while work:
        v, i = work[-1]
        row = g.succ[v]
        if i < len(row):
            work[-1] = (v, i + 1)
            w = row[i]
            if index[w] == 0:
                counter += 1
                index[w] = low[w] = counter
                stack.append(w)
                on_stack[w] = True
                work.append((w, 0))
            elif on_stack[w] and index[w] < low[v]:
                low[v] = index[w]
            continue
        work.pop()
        if work:
            u = work[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
        if low[v] == index[v]:
            members = []
            while True:
                w = stack.pop()
                on_stack[w] = False
                members.append(w)
                if w == v:
                    break
            members.reverse()
            nontrivial = len(members) > 1 or v in g.succ[v]
            found.append(SCC(tuple(members), nontrivial))
    found.reverse()
    return found


def is_weak(g: ExplicitGBA) -> bool:
    if g.k != 1:
        raise ContractError(f"weakness is defined for k=1 automata, got k={g.k}")
    for comp in scc_decompose(g):
        flags = {g.acc[s] & 1 for s in comp.states}
        if len(flags) > 1:
            return False
    return True


def degeneralize(g: ExplicitGBA) -> ExplicitGBA:
    """Counter construction: copy ``i`` waits for a state of ``A_i``.

    State ``(s, i)`` is numbered ``(i - 1) * n + s``; the initial state is
    ``(init, 1)`` and the accepting states are ``(s, k)`` with ``s`` in ``A_k``.
    """
    n, k = g.n, g.k
    if k == 0:
        return ExplicitGBA(n, g.init, [list(r) for r in g.succ], [1] * n, 1)
    succ = []
    acc = []
    for i in range(1, k + 1):
        bit = 1 << (i - 1)
        for s in range(n):
            j = (i % k) + 1 if g.acc[s] & bit else i
            succ.append([(j - 1) * n + t for t in g.succ[s]])
            acc.append(1 if i == k and g.acc[s] & bit else 0)
    return ExplicitGBA(n * k, g.init, succ, acc, 1)

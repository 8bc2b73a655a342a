"""Debug-mode invariant checkers, driven by hooks inside the searches.

They recompute everything from scratch at every step, so they are meant for
small instances (a few dozen states).
"""

from __future__ import annotations

from collections import deque

from .automata import ExplicitGBA, decode_state, full_mask, scc_decompose
from .errors import InvariantViolation
from .ndfs import BLUE, CYAN, RED, WHITE

_LEGAL = {(WHITE, CYAN), (CYAN, RED), (CYAN, BLUE), (BLUE, RED)}


def doomed_states(g: ExplicitGBA) -> set[int]:
    """States of ``g`` that lie on some counterexample (reach an accepting SCC)."""
    K = full_mask(g.k)
    fair = set()
    for comp in scc_decompose(g):
        union = 0
        for s in comp.states:
            union |= g.acc[s]
        if comp.nontrivial and union & K == K:
            fair.update(comp.states)
    pred = [[] for _ in range(g.n)]
    for s, t in g.edges():
        pred[t].append(s)
    out = set(fair)
    queue = deque(fair)
    while queue:
        t = queue.popleft()
        for s in pred[t]:
            if s not in out:
                out.add(s)
                queue.append(s)
    return out


class ColourChecker:
    """Colour semantics of the improved nested DFS.

    (a) cyan iff the blue invocation is unfinished, (b) cyan states reach the
    active blue state, (c) blue states are non-accepting and finished,
    (d) red states lie on no counterexample whenever a blue invocation ends.
    ``g`` must be the explicit automaton behind the search's provider.
    """

    def __init__(self, g: ExplicitGBA | None = None):
        self.doomed = doomed_states(g) if g is not None else None
        self.steps = 0

    def fail(self, msg):
        raise InvariantViolation(msg)

    def on_colour(self, search, s, old, new):
        if (old, new) not in _LEGAL:
            self.fail(f"illegal colour change {old}->{new} on state {s}")

    def on_step(self, search):
        self.steps += 1
        colour = search.colour
        on_path = {f[0] for f in search.path}
        cyan = {s for s in range(len(colour)) if colour[s] == CYAN}
        if cyan != on_path:
            self.fail(f"(a) cyan states {sorted(cyan)} differ from the blue path {sorted(on_path)}")
        path = search.path
        for a, b in zip(path, path[1:]):
            # the explored part of a's successors ends with b
            if a[1][a[2] - 1] != b[0]:
                self.fail("(b) consecutive blue-path states are not linked by an edge")
        for s in range(len(colour)):
            if colour[s] == BLUE and (search.accepting[s] or s in on_path):
                self.fail(f"(c) blue state {s} is accepting or unfinished")

    def on_blue_finished(self, search, s):
        self.on_step(search)
        if self.doomed is None:
            return
        colour = search.colour
        for ref in range(len(colour)):
            if colour[ref] == RED and decode_state(search.store.descriptor(ref)) in self.doomed:
                self.fail(f"(d) red state {ref} lies on a counterexample")


def _tarjan_sccs(nodes, succ):
    """SCCs of the graph (nodes, succ-dict); returns {node: frozenset}."""
    index, low, stack, on, comp = {}, {}, [], set(), {}
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        counter[0] += 1
        index[root] = low[root] = counter[0]
        stack.append(root)
        on.add(root)
        work = [(root, iter(succ.get(root, ())))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    counter[0] += 1
                    index[w] = low[w] = counter[0]
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    pushed = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    members.append(w)
                    if w == v:
                        break
                fs = frozenset(members)
                for w in members:
                    comp[w] = fs
    return comp


def _reach_set(succ, a):
    seen = {a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in succ.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


class SCCChecker:
    """Active-graph invariants for the ASCC, GV and C99 searches.

    Tracks the explored graph through hooks and, after every explored state
    or transition, checks: search-path numbers increase (Fact 1); each Roots
    entry is the least-numbered state of its active SCC and carries the union
    of its acceptance sets (Fact 2, main invariant); roots form a
    subsequence of the path (Fact 6); a lower-numbered active state reaches
    every higher-numbered one (Fact 8); Active holds exactly the active,
    current-flagged states in numbering order.  Every group of states retired
    together must be an SCC of the full automaton (Facts 4/5).
    """

    def __init__(self, g: ExplicitGBA | None = None, check_reach=True):
        self.succ: dict[int, list[int]] = {}
        self.steps = 0
        self.check_reach = check_reach
        self.offline = None
        if g is not None:
            self.offline = {}
            for comp in scc_decompose(g):
                fs = frozenset(comp.states)
                for s in comp.states:
                    self.offline[s] = fs

    def fail(self, msg):
        raise InvariantViolation(msg)

    def on_visit(self, search, s):
        self.succ.setdefault(s, [])

    def on_edge(self, search, s, t):
        self.succ[s].append(t)
        self.succ.setdefault(t, [])

    def on_inactive(self, search, members):
        if self.offline is None:
            return
        got = frozenset(decode_state(search.store.descriptor(s)) for s in members)
        want = self.offline[next(iter(got))]
        if got != want:
            self.fail(f"retired states {sorted(got)} are not the SCC {sorted(want)}")

    def on_step(self, search):
        self.steps += 1
        nums = search.nums
        path = [f[0] for f in search.path]
        pnums = [nums[s] for s in path]
        if any(a >= b for a, b in zip(pnums, pnums[1:])):
            self.fail(f"Fact 1: search-path numbers not increasing: {pnums}")
        comp = _tarjan_sccs(list(self.succ), self.succ)
        active_sccs = {comp[s] for s in path}
        active = set().union(*active_sccs) if active_sccs else set()
        expected_roots = sorted((min(c, key=lambda x: nums[x]) for c in active_sccs),
                                key=lambda x: nums[x])
        in_scope = {s for s in self.succ if search.in_scope(s)}
        if in_scope != active:
            self.fail(f"main invariant: in-scope states {sorted(in_scope)} != active {sorted(active)}")
        if getattr(search, "active", None) is not None:
            act = search.active
            if set(act) != active or len(act) != len(active):
                self.fail("main invariant: Active stack differs from the active states")
            anums = [nums[s] for s in act]
            if anums != sorted(anums):
                self.fail("Active stack is not in numbering order")
        roots = getattr(search, "roots", None)
        if roots is not None:
            got = [u for u, _ in roots]
            if got != expected_roots:
                self.fail(f"Fact 2/main invariant: roots {got} != {expected_roots}")
            for u, B in roots:
                union = 0
                for s in comp[u]:
                    union |= search.accs[s]
                if B != union:
                    self.fail(f"main invariant: root {u} carries {B:b}, SCC has {union:b}")
            pos = 0
            for u in got:
                while pos < len(path) and path[pos] != u:
                    pos += 1
                if pos == len(path):
                    self.fail("Fact 6: roots are not a subsequence of the search path")
                pos += 1
        low = getattr(search, "low", None)
        if low is not None:
            for s in active:
                if low[s] > nums[s]:
                    self.fail(f"lowlink of {s} exceeds its number")
        if self.check_reach:
            ordered = sorted(active, key=lambda x: nums[x])
            for i, a in enumerate(ordered[:-1]):
                seen = _reach_set(self.succ, a)
                for b in ordered[i + 1:]:
                    if b not in seen:
                        self.fail(f"Fact 8: active {a} does not reach {b}")

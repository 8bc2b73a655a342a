"""Ground truth for emptiness, independent of any exploration order."""

from __future__ import annotations

from collections import deque

from .automata import (
    AutomatonProvider,
    ExplicitGBA,
    Verdict,
    encode_state,
    full_mask,
    scc_decompose,
)


def _bfs_path(succ, src, goal, allowed=None, min_edges=0):
    """Shortest state list from ``src`` to a goal state (both included)."""
    if min_edges == 0 and goal(src):
        return [src]
    parent = {}
    queue = deque()
    for t in succ[src]:
        if (allowed is None or t in allowed) and t not in parent:
            parent[t] = src
            queue.append(t)
    while queue:
        x = queue.popleft()
        if goal(x):
            out = [x]
            while parent[out[-1]] != src:
                out.append(parent[out[-1]])
            out.append(src)
            out.reverse()
            return out
        for t in succ[x]:
            if (allowed is None or t in allowed) and t not in parent:
                parent[t] = x
                queue.append(t)
    return None


def accepting_sccs(g: ExplicitGBA):
    """Reachable non-trivial SCCs meeting every acceptance set."""
    K = full_mask(g.k)
    out = []
    for comp in scc_decompose(g):
        if not comp.nontrivial:
            continue
        union = 0
        for s in comp.states:
            union |= g.acc[s]
        if union & K == K:
            out.append(comp)
    return out


def oracle_lasso(g: ExplicitGBA):
    """``(prefix, loop)`` over state indices, or ``None`` if ``g`` is empty."""
    comps = accepting_sccs(g)
    if not comps:
        return None
    comp = comps[0]
    members = set(comp.states)
    prefix_path = _bfs_path(g.succ, g.init, lambda x: x in members)
    entry = prefix_path[-1]
    prefix = prefix_path[:-1]
    loop = [entry]
    cur = entry
    need = full_mask(g.k) & ~g.acc[entry]
    # cover one missing condition at a time, then walk back to the entry
    while need:
        seg = _bfs_path(g.succ, cur, lambda x: g.acc[x] & need, members, min_edges=1)
        loop.extend(seg[1:])
        cur = seg[-1]
        need &= ~g.acc[cur]
    seg = _bfs_path(g.succ, cur, lambda x: x == entry, members, min_edges=1)
    loop.extend(seg[1:-1])
    return prefix, loop


def oracle_emptiness(g: ExplicitGBA) -> Verdict:
    found = oracle_lasso(g)
    if found is None:
        return Verdict.empty()
    prefix, loop = found
    return Verdict.counterexample([encode_state(s) for s in prefix], [encode_state(s) for s in loop])


def validate_lasso(p: AutomatonProvider, v: Verdict) -> bool:
    """Check that ``v`` describes an accepting run of ``p``."""
    if not v.is_counterexample or not v.loop:
        return False
    run = list(v.prefix) + list(v.loop)
    if run[0] != p.initial():
        return False
    for a, b in zip(run, run[1:]):
        if b not in p.post(a):
            return False
    if v.loop[0] not in p.post(v.loop[-1]):
        return False
    K = full_mask(p.conditions())
    seen = 0
    for s in v.loop:
        seen |= p.acceptance(s)
    return seen & K == K


# -- exhaustive cross-check (small instances only) ----------------------------

def simple_cycles(g: ExplicitGBA, states):
    """All simple cycles among ``states``; each listed once, smallest state first."""
    allowed = set(states)
    cycles = []
    for start in sorted(allowed):
        # DFS over states > start so every cycle is emitted from its minimum
        stack = [(start, iter(g.succ[start]))]
        on_path = [start]
        in_path = {start}
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in allowed or w < start:
                    continue
                if w == start:
                    cycles.append(tuple(on_path))
                elif w not in in_path:
                    stack.append((w, iter(g.succ[w])))
                    on_path.append(w)
                    in_path.add(w)
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                in_path.discard(on_path.pop())
    return cycles


def exhaustive_emptiness(g: ExplicitGBA) -> bool:
    """True iff ``g`` is non-empty, decided by enumerating simple cycles.

    Cycles that share a state merge into one strongly connected set; a
    counterexample exists iff some merged group covers every condition.
    """
    reach = g.reachable()
    cycles = simple_cycles(g, reach)
    if not cycles:
        return False
    K = full_mask(g.k)
    owner = {}
    parent = list(range(len(cycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for ci, cyc in enumerate(cycles):
        for s in cyc:
            if s in owner:
                a, b = find(owner[s]), find(ci)
                if a != b:
                    parent[a] = b
            else:
                owner[s] = ci
    union = {}
    for ci, cyc in enumerate(cycles):
        r = find(ci)
        for s in cyc:
            union[r] = union.get(r, 0) | g.acc[s]
    return any(u & K == K for u in union.values())

"""SCC-based emptiness checks.

* :func:`ascc_check` - roots stack plus the Tarjan (``Active``) stack; works
  for any number of acceptance conditions.
* :func:`gv_check` - Tarjan lowlinks plus a stack holding the numbers of the
  accepting states on the search path; Büchi automata only.
* :func:`c99_check` - roots stack without the Tarjan stack.  Finished SCCs are
  retired by a second DFS that calls ``post`` again for each of their states.

All three report as soon as the explored graph contains a counterexample and,
for the same exploration order, stop at the same transition.
"""

from __future__ import annotations

from collections import deque

from .automata import AutomatonProvider, InternStore, Verdict, full_mask
from .errors import ContractError, InvariantViolation
from .metrics import Metrics, Stopwatch
from .trace import format_accset


class _Report(Exception):
    def __init__(self, verdict):
        self.verdict = verdict


def extract_lasso(view, root, K: int, floor=None):
    """Build ``(prefix, loop)`` for a counterexample found at state ``root``.

    ``view`` exposes ``path`` (search-path states), ``path_pos(s)``,
    ``num(s)``, ``in_scope(s)``, ``explored(s)`` (successors already
    explored) and ``acc(s)``.  The loop stays inside the in-scope states
    numbered at least ``floor`` (default ``num(root)``), uses only explored
    transitions, and visits every acceptance condition in ``K``.
    """
    base = view.num(root) if floor is None else floor

    def allowed(x):
        return view.in_scope(x) and view.num(x) >= base

    def bfs(src, goal):
        # at least one edge; src itself is never tested as a goal
        parent = {}
        queue = deque()
        for t in view.explored(src):
            if allowed(t) and t not in parent:
                parent[t] = src
                queue.append(t)
        while queue:
            x = queue.popleft()
            if goal(x):
                out = [x]
                while parent[out[-1]] != src:
                    out.append(parent[out[-1]])
                out.reverse()
                return out
            for t in view.explored(x):
                if allowed(t) and t not in parent:
                    parent[t] = x
                    queue.append(t)
        return None

    loop = [root]
    cur = root
    need = K & ~view.acc(root)
    while need:
        seg = bfs(cur, lambda x: view.acc(x) & need)
        if seg is None:
            raise InvariantViolation("no state covers the missing acceptance conditions")
        loop.extend(seg)
        cur = seg[-1]
        need &= ~view.acc(cur)
    seg = bfs(cur, lambda x: x == root)
    if seg is None:
        raise InvariantViolation("merged component does not close a cycle")
    loop.extend(seg[:-1])
    prefix = view.path[: view.path_pos(root)]
    return prefix, loop


class _SCCSearch:
    """State tables and the lasso view shared by the three algorithms."""

    name = "scc"
    aux_bits = 0

    def __init__(self, p: AutomatonProvider, trace=None, debug=None):
        self.p = p
        self.K = full_mask(p.conditions())
        self.trace = trace
        self.debug = debug
        self.metrics = Metrics(aux_bits_per_state=self.aux_bits)
        self.store = InternStore()
        self.nums: list[int] = []
        self.accs: list[int] = []
        self.path: list[list] = []
        self.count = 0
        # successor lists of finished states that may still close a cycle
        self.finished_succ: dict[int, list] = {}

    def state(self, desc):
        ref, new = self.store.intern(desc)
        if new:
            self.nums.append(0)
            self.accs.append(self.p.acceptance(desc))
            self.new_state()
        return ref

    def new_state(self):
        pass

    def post(self, s):
        m = self.metrics
        m.post_calls += 1
        succ = self.p.post(self.store.descriptor(s))
        m.successors_generated += len(succ)
        return [self.state(t) for t in succ]

    def enter(self, s):
        self.count += 1
        self.nums[s] = self.count
        if self.trace is not None:
            self.trace("visit", s)
        if self.debug is not None:
            self.debug.on_visit(self, s)

    def push_frame(self, s):
        self.path.append([s, self.post(s), 0])
        depth = len(self.path)
        if depth > self.metrics.max_search_depth:
            self.metrics.max_search_depth = depth

    def run(self):
        with Stopwatch(self.metrics):
            try:
                self.search(self.state(self.p.initial()))
                verdict = Verdict.empty()
            except _Report as rep:
                verdict = rep.verdict
            self.metrics.distinct_states = len(self.store)
            self.metrics.descriptor_bytes = self.store.total_bytes()
        if self.trace is not None:
            self.trace("report", verdict.kind)
        return verdict, self.metrics

    def edge(self, s, t):
        self.metrics.transitions_explored += 1
        if self.trace is not None:
            self.trace("edge", s, t)
        if self.debug is not None:
            self.debug.on_edge(self, s, t)

    # -- lasso view ------------------------------------------------------------

    @property
    def path_states(self):
        return [f[0] for f in self.path]

    def path_pos(self, s):
        for i, f in enumerate(self.path):
            if f[0] == s:
                return i
        raise InvariantViolation(f"state {s} is not on the search path")

    def num(self, s):
        return self.nums[s]

    def acc(self, s):
        return self.accs[s]

    def explored(self, s):
        succ = self.finished_succ.get(s)
        if succ is not None:
            return succ
        for f in self.path:
            if f[0] == s:
                return f[1][: f[2]]
        return ()

    def in_scope(self, s):
        raise NotImplementedError

    def report(self, root, floor=None):
        view = _FrozenView(self)
        prefix, loop = extract_lasso(view, root, self.K, floor)
        d = self.store.descriptor
        raise _Report(Verdict.counterexample([d(s) for s in prefix], [d(s) for s in loop]))


class _FrozenView:
    """Snapshot of a search for lasso extraction, with the path indexed once."""

    def __init__(self, search):
        self.path = search.path_states
        self._pos = {s: i for i, s in enumerate(self.path)}
        self._frames = {f[0]: f for f in search.path}
        self._finished = search.finished_succ
        self.num = search.num
        self.acc = search.acc
        self.in_scope = search.in_scope

    def path_pos(self, s):
        try:
            return self._pos[s]
        except KeyError:
            raise InvariantViolation(f"state {s} is not on the search path") from None

    def explored(self, s):
        succ = self._finished.get(s)
        if succ is not None:
            return succ
        f = self._frames.get(s)
        return f[1][: f[2]] if f is not None else ()


class _RootsMixin:
    def collapse(self, t):
        """Merge the roots above ``t``'s component root; report if B = K."""
        roots, nums, num_t = self.roots, self.nums, self.nums[t]
        B = 0
        while True:
            u, C = roots.pop()
            if self.trace is not None:
                self.trace("roots-pop", u)
            B |= C
            if B == self.K:
                if self.trace is not None:
                    self.trace("collapse", format_accset(B))
                if nums[u] > num_t:
                    u = next(r for r, _ in reversed(roots) if nums[r] <= num_t)
                self.report(u)
            if nums[u] <= num_t:
                break
        roots.append((u, B))
        if self.trace is not None:
            self.trace("collapse", format_accset(B))
            self.trace("roots-push", u)


class ASCCSearch(_RootsMixin, _SCCSearch):
    name = "ascc"

    def __init__(self, p, trace=None, debug=None):
        super().__init__(p, trace, debug)
        self.current = bytearray()
        self.roots: list[tuple[int, int]] = []
        self.active: list[int] = []

    def new_state(self):
        self.current.append(0)

    def in_scope(self, s):
        return self.current[s] == 1

    def push(self, s):
        self.enter(s)
        self.current[s] = 1
        self.roots.append((s, self.accs[s]))
        self.active.append(s)
        if self.trace is not None:
            self.trace("roots-push", s)
        self.push_frame(s)

    def search(self, s0):
        self.push(s0)
        path, nums, current, debug = self.path, self.nums, self.current, self.debug
        while path:
            frame = path[-1]
            s, succ, i = frame
            if i < len(succ):
                frame[2] = i + 1
                t = succ[i]
                self.edge(s, t)
                if nums[t] == 0:
                    self.push(t)
                elif current[t]:
                    self.collapse(t)
                if debug is not None:
                    debug.on_step(self)
                continue
            path.pop()
            if self.roots[-1][0] == s:
                self.roots.pop()
                if self.trace is not None:
                    self.trace("roots-pop", s)
                self.retire(s)
            else:
                self.finished_succ[s] = succ
            if debug is not None:
                debug.on_step(self)

    def retire(self, s):
        members = []
        while True:
            u = self.active.pop()
            self.current[u] = 0
            self.finished_succ.pop(u, None)
            members.append(u)
            if self.trace is not None:
                self.trace("inactive", u)
            if u == s:
                break
        if self.debug is not None:
            self.debug.on_inactive(self, members)


class GVSearch(_SCCSearch):
    name = "gv"

    def __init__(self, p, trace=None, debug=None):
        if p.conditions() != 1:
            raise ContractError(f"GV handles Büchi automata only (k=1), got k={p.conditions()}")
        super().__init__(p, trace, debug)
        self.low: list[int] = []
        self.current = bytearray()
        self.active: list[int] = []
        self.acc_nums: list[int] = []

    def new_state(self):
        self.low.append(0)
        self.current.append(0)

    def in_scope(self, s):
        return self.current[s] == 1

    def push(self, s):
        self.enter(s)
        self.low[s] = self.count
        self.current[s] = 1
        self.active.append(s)
        if self.accs[s] & 1:
            self.acc_nums.append(self.count)
        self.push_frame(s)

    def report_at_accepting(self, num):
        # the cycle passes through this accepting path state but may dip
        # below it, so the loop search covers every active state
        for f in reversed(self.path):
            if self.nums[f[0]] == num:
                self.report(f[0], floor=1)
        raise InvariantViolation("accepting state missing from the search path")

    def search(self, s0):
        self.push(s0)
        path, nums, low, current = self.path, self.nums, self.low, self.current
        acc_nums, debug = self.acc_nums, self.debug
        while path:
            frame = path[-1]
            s, succ, i = frame
            if i < len(succ):
                frame[2] = i + 1
                t = succ[i]
                self.edge(s, t)
                if nums[t] == 0:
                    self.push(t)
                elif current[t]:
                    if nums[t] < low[s]:
                        low[s] = nums[t]
                    if acc_nums and nums[t] <= acc_nums[-1]:
                        self.report_at_accepting(acc_nums[-1])
                if debug is not None:
                    debug.on_step(self)
                continue
            is_acc = self.accs[s] & 1
            if is_acc and low[s] < nums[s]:
                self.report_at_accepting(nums[s])
            path.pop()
            if is_acc:
                acc_nums.pop()
            if low[s] == nums[s]:
                self.retire(s)
            else:
                self.finished_succ[s] = succ
            if path:
                parent = path[-1][0]
                if low[s] < low[parent]:
                    low[parent] = low[s]
            if debug is not None:
                debug.on_step(self)

    def retire(self, s):
        members = []
        while True:
            u = self.active.pop()
            self.current[u] = 0
            self.finished_succ.pop(u, None)
            members.append(u)
            if self.trace is not None:
                self.trace("inactive", u)
            if u == s:
                break
        if self.debug is not None:
            self.debug.on_inactive(self, members)


class C99Search(_RootsMixin, _SCCSearch):
    name = "c99"

    def __init__(self, p, trace=None, debug=None):
        super().__init__(p, trace, debug)
        self.removed = bytearray()
        self.roots: list[tuple[int, int]] = []

    def new_state(self):
        self.removed.append(0)

    def in_scope(self, s):
        return self.nums[s] > 0 and not self.removed[s]

    def push(self, s):
        self.enter(s)
        self.roots.append((s, self.accs[s]))
        if self.trace is not None:
            self.trace("roots-push", s)
        self.push_frame(s)

    def search(self, s0):
        self.push(s0)
        path, nums, removed, debug = self.path, self.nums, self.removed, self.debug
        while path:
            frame = path[-1]
            s, succ, i = frame
            if i < len(succ):
                frame[2] = i + 1
                t = succ[i]
                self.edge(s, t)
                if nums[t] == 0:
                    self.push(t)
                elif not removed[t]:
                    self.collapse(t)
                if debug is not None:
                    debug.on_step(self)
                continue
            path.pop()
            if self.roots[-1][0] == s:
                self.roots.pop()
                if self.trace is not None:
                    self.trace("roots-pop", s)
                self.remove(s)
            else:
                self.finished_succ[s] = succ
            if debug is not None:
                debug.on_step(self)

    def remove(self, s):
        """Second DFS over the finished SCC of ``s``; recomputes successors."""
        removed, nums = self.removed, self.nums
        members = [s]
        removed[s] = 1
        self.finished_succ.pop(s, None)
        if self.trace is not None:
            self.trace("inactive", s)
        stack = [[s, self.post(s), 0]]
        base = len(self.path)
        while stack:
            frame = stack[-1]
            u, succ, i = frame
            if i < len(succ):
                frame[2] = i + 1
                t = succ[i]
                self.metrics.transitions_explored += 1
                if nums[t] > 0 and not removed[t]:
                    removed[t] = 1
                    self.finished_succ.pop(t, None)
                    members.append(t)
                    if self.trace is not None:
                        self.trace("inactive", t)
                    stack.append([t, self.post(t), 0])
                    depth = base + len(stack)
                    if depth > self.metrics.max_search_depth:
                        self.metrics.max_search_depth = depth
                continue
            stack.pop()
        if self.debug is not None:
            self.debug.on_inactive(self, members)


def ascc_check(p: AutomatonProvider, trace=None, debug=None):
    return ASCCSearch(p, trace, debug).run()


def gv_check(p: AutomatonProvider, trace=None, debug=None):
    return GVSearch(p, trace, debug).run()


def c99_check(p: AutomatonProvider, trace=None, debug=None):
    return C99Search(p, trace, debug).run()

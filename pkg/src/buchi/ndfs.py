"""Nested depth-first search emptiness checks for Büchi automata (k = 1).

* :func:`and_check` - blue/red search with cyan early detection and the
  "all successors red" shortcut that skips useless red searches.
* :func:`ndfs_baseline` - the classic pattern: a red search from every
  accepting state in post-order, reporting when it returns to its seed.
* :func:`sd_check` - blue search only; complete for weak automata.

All searches are iterative; a frame is ``[state, successors, cursor, allred]``.
"""

from __future__ import annotations

from .automata import AutomatonProvider, InternStore, Verdict
from .errors import ContractError
from .metrics import Metrics, Stopwatch

WHITE, CYAN, BLUE, RED = 0, 1, 2, 3
COLOUR_NAMES = ("white", "cyan", "blue", "red")

_STATE, _SUCC, _CURSOR, _ALLRED = 0, 1, 2, 3


class _Report(Exception):
    """Unwinds the search once a counterexample has been assembled."""

    def __init__(self, verdict):
        self.verdict = verdict


class NestedSearch:
    """Exact-mode blue/red search; ``mode`` selects AND or SD behaviour."""

    aux_bits = 2

    def __init__(self, p: AutomatonProvider, mode="and", trace=None, debug=None):
        if p.conditions() != 1:
            raise ContractError(f"nested DFS needs a Büchi automaton (k=1), got k={p.conditions()}")
        self.p = p
        self.mode = mode
        self.trace = trace
        self.debug = debug
        self.metrics = Metrics(aux_bits_per_state=self.aux_bits)
        self.store = InternStore()
        self.colour = bytearray()
        self.accepting: list[bool] = []
        self.path: list[list] = []
        self.path_index: dict = {}
        self.red_stack: list[list] = []
        self.seed = None

    # -- state access; overridden by the bitstate search ----------------------

    def state(self, desc):
        ref, new = self.store.intern(desc)
        if new:
            self.colour.append(WHITE)
            self.accepting.append(bool(self.p.acceptance(desc) & 1))
        return ref

    def descriptor(self, s):
        return self.store.descriptor(s)

    def is_accepting(self, s) -> bool:
        return self.accepting[s]

    def get_colour(self, s) -> int:
        return self.colour[s]

    def set_colour(self, s, new):
        old = self.colour[s]
        self.colour[s] = new
        if self.trace is not None:
            self.trace("color", self.label(s), COLOUR_NAMES[old], COLOUR_NAMES[new])
        if self.debug is not None:
            self.debug.on_colour(self, s, old, new)

    def is_cyan(self, s) -> bool:
        return self.colour[s] == CYAN

    def label(self, s):
        return s

    def post(self, s):
        m = self.metrics
        m.post_calls += 1
        succ = self.p.post(self.descriptor(s))
        m.successors_generated += len(succ)
        return [self.state(t) for t in succ]

    def finish_metrics(self):
        self.metrics.distinct_states = len(self.store)
        self.metrics.descriptor_bytes = self.store.total_bytes()

    # -- search ----------------------------------------------------------------

    def run(self) -> tuple[Verdict, Metrics]:
        with Stopwatch(self.metrics):
            try:
                self.blue(self.state(self.p.initial()))
                verdict = Verdict.empty()
            except _Report as rep:
                verdict = rep.verdict
            self.finish_metrics()
        if self.trace is not None:
            self.trace("report", verdict.kind)
        return verdict, self.metrics

    def push_blue(self, s):
        self.set_colour(s, CYAN)
        if self.trace is not None:
            self.trace("visit", self.label(s))
        self.path_index[s] = len(self.path)
        self.path.append([s, self.post(s), 0, True])
        depth = len(self.path)
        if depth > self.metrics.max_search_depth:
            self.metrics.max_search_depth = depth

    def blue(self, s0):
        self.push_blue(s0)
        path = self.path
        while path:
            frame = path[-1]
            s, succ, i = frame[0], frame[1], frame[2]
            if self.debug is not None:
                self.debug.on_step(self)
            if i < len(succ):
                frame[_CURSOR] = i + 1
                t = succ[i]
                self.metrics.transitions_explored += 1
                if self.trace is not None:
                    self.trace("edge", self.label(s), self.label(t))
                c = self.get_colour(t)
                if c == CYAN and self.on_path(t) and (self.is_accepting(s) or self.is_accepting(t)):
                    self.report_blue(t)
                elif c == WHITE:
                    self.push_blue(t)
                    continue
                self.note_successor(frame, c)
                continue
            self.finish_blue(frame)
            path.pop()
            del self.path_index[s]
            if self.debug is not None:
                self.debug.on_blue_finished(self, s)
            if path:
                self.note_successor(path[-1], self.get_colour(s))

    def on_path(self, t) -> bool:
        return True

    def note_successor(self, frame, c):
        if c != RED:
            frame[_ALLRED] = False

    def finish_blue(self, frame):
        s = frame[_STATE]
        if self.mode == "sd":
            self.set_colour(s, RED if self.is_accepting(s) else BLUE)
        elif frame[_ALLRED]:
            self.set_colour(s, RED)
        elif self.is_accepting(s):
            self.red(s)
            self.set_colour(s, RED)
        else:
            self.set_colour(s, BLUE)

    def red(self, seed):
        self.seed = seed
        stack = self.red_stack
        stack.append([seed, self.post(seed), 0])
        base = len(self.path)
        while stack:
            frame = stack[-1]
            u, succ, i = frame
            if i < len(succ):
                frame[2] = i + 1
                t = succ[i]
                self.metrics.transitions_explored += 1
                if self.trace is not None:
                    self.trace("edge", self.label(u), self.label(t))
                c = self.get_colour(t)
                if c == CYAN and self.on_path(t):
                    self.report_red(t)
                elif c == BLUE:
                    self.set_colour(t, RED)
                    if self.trace is not None:
                        self.trace("visit", self.label(t))
                    stack.append([t, self.post(t), 0])
                    depth = base + len(stack) - 1
                    if depth > self.metrics.max_search_depth:
                        self.metrics.max_search_depth = depth
                if self.debug is not None:
                    self.debug.on_step(self)
                continue
            stack.pop()
        self.seed = None

    # -- counterexamples -------------------------------------------------------

    def report_blue(self, t):
        i = self.path_index[t]
        states = [f[_STATE] for f in self.path]
        self._raise(states[:i], states[i:])

    def report_red(self, t):
        i = self.path_index[t]
        states = [f[_STATE] for f in self.path]
        red_tail = [f[0] for f in self.red_stack[1:]]
        self._raise(states[:i], states[i:] + red_tail)

    def _raise(self, prefix, loop):
        d = self.descriptor
        raise _Report(Verdict.counterexample([d(s) for s in prefix], [d(s) for s in loop]))


class BaselineSearch(NestedSearch):
    """Two bits per state: a visited bit (cyan/blue) and an independent red bit.

    The red search runs from every accepting state as its blue search ends,
    walks every non-red state and reports only when it reaches its seed.
    """

    def __init__(self, p, trace=None, debug=None):
        super().__init__(p, mode="baseline", trace=trace, debug=debug)
        self.red_bit = bytearray()

    def state(self, desc):
        ref = super().state(desc)
        if ref == len(self.red_bit):
            self.red_bit.append(0)
        return ref

    def note_successor(self, frame, c):
        pass

    def mark_red(self, s):
        self.red_bit[s] = 1
        if self.trace is not None:
            self.trace("color", self.label(s), COLOUR_NAMES[self.colour[s]], "red")

    def finish_blue(self, frame):
        s = frame[_STATE]
        self.set_colour(s, BLUE)
        if self.is_accepting(s):
            self.red(s)
            self.mark_red(s)

    def blue(self, s0):
        # identical traversal, but the cyan check of the blue search is absent
        self.push_blue(s0)
        path = self.path
        while path:
            frame = path[-1]
            s, succ, i = frame[0], frame[1], frame[2]
            if i < len(succ):
                frame[_CURSOR] = i + 1
                t = succ[i]
                self.metrics.transitions_explored += 1
                if self.trace is not None:
                    self.trace("edge", self.label(s), self.label(t))
                if self.colour[t] == WHITE:
                    self.push_blue(t)
                continue
            path.pop()
            del self.path_index[s]
            self.finish_blue(frame)

    def red(self, seed):
        # the seed has already left the blue path, which is now the prefix
        stack = self.red_stack
        stack.append([seed, self.post(seed), 0])
        base = len(self.path) + 1
        while stack:
            frame = stack[-1]
            u, succ, i = frame
            if i < len(succ):
                frame[2] = i + 1
                t = succ[i]
                self.metrics.transitions_explored += 1
                if self.trace is not None:
                    self.trace("edge", self.label(u), self.label(t))
                if t == seed:
                    loop = [f[0] for f in stack]
                    prefix = [f[_STATE] for f in self.path]
                    self._raise(prefix, loop)
                if not self.red_bit[t]:
                    self.mark_red(t)
                    if self.trace is not None:
                        self.trace("visit", self.label(t))
                    stack.append([t, self.post(t), 0])
                    depth = base + len(stack) - 1
                    if depth > self.metrics.max_search_depth:
                        self.metrics.max_search_depth = depth
                continue
            stack.pop()


def and_check(p: AutomatonProvider, trace=None, debug=None):
    """Improved nested DFS; returns ``(Verdict, Metrics)``."""
    return NestedSearch(p, "and", trace, debug).run()


def ndfs_baseline(p: AutomatonProvider, trace=None, debug=None):
    return BaselineSearch(p, trace, debug).run()


def sd_check(p: AutomatonProvider, weak_asserted=True, trace=None, debug=None):
    """Single blue search, reporting only through the cyan check.

    Sound only for weak automata; when the caller does not vouch for
    weakness the verdict carries the ``unsound-if-not-weak`` flag.
    """
    verdict, metrics = NestedSearch(p, "sd", trace, debug).run()
    if not weak_asserted:
        verdict = verdict.with_flags("unsound-if-not-weak")
    return verdict, metrics

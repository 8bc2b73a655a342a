"""Line-oriented text format for explicit automata.

::

    # comment
    gba <n> <k>
    init <s>
    acc <s> <j>        (j is 1-based)
    edge <u> <v>       (file order = exploration order)
"""

from __future__ import annotations

import shlex
from pathlib import Path

from .automata import ExplicitGBA, acc_indices
from .errors import FormatError


def tokenize(text: str, source=None):
    """Yield ``(line_number, tokens)`` for non-blank, non-comment lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            tokens = shlex.split(stripped, comments=True)
        except ValueError as exc:
            raise FormatError(str(exc), lineno, source) from None
        if tokens:
            yield lineno, tokens


def to_int(token: str, lineno, source, what="integer") -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"expected {what}, got {token!r}", lineno, source) from None
    if value < 0:
        raise FormatError(f"expected non-negative {what}, got {value}", lineno, source)
    return value


class _GraphBuilder:
    """Collects header/init/acc/edge lines shared by the automaton formats."""

    def __init__(self, source):
        self.source = source
        self.n = None
        self.k = None
        self.init = None
        self.acc = None
        self.succ = None
        self.extra = None

    def header(self, n, k, lineno):
        if self.n is not None:
            raise FormatError("duplicate header", lineno, self.source)
        if n < 1:
            raise FormatError("automaton needs at least one state", lineno, self.source)
        self.n, self.k = n, k
        self.acc = [0] * n
        self.succ = [[] for _ in range(n)]
        self.extra = [[] for _ in range(n)]

    def need_header(self, lineno):
        if self.n is None:
            raise FormatError("missing header line", lineno, self.source)

    def state(self, token, lineno):
        s = to_int(token, lineno, self.source, "state")
        if s >= self.n:
            raise FormatError(f"state {s} out of range (n={self.n})", lineno, self.source)
        return s

    def add_edge(self, u, v, lineno, payload=None):
        if v in self.succ[u]:
            raise FormatError(f"duplicate edge {u}->{v}", lineno, self.source)
        self.succ[u].append(v)
        self.extra[u].append(payload)

    def line(self, lineno, tokens, header_kw="gba"):
        """Handle a common line; return False if the keyword is not common."""
        kw, args = tokens[0], tokens[1:]
        if kw == header_kw:
            if len(args) != 2:
                raise FormatError(f"usage: {header_kw} <n> <k>", lineno, self.source)
            self.header(to_int(args[0], lineno, self.source),
                        to_int(args[1], lineno, self.source), lineno)
        elif kw == "init":
            self.need_header(lineno)
            if len(args) != 1:
                raise FormatError("usage: init <s>", lineno, self.source)
            if self.init is not None:
                raise FormatError("duplicate init line", lineno, self.source)
            self.init = self.state(args[0], lineno)
        elif kw == "acc":
            self.need_header(lineno)
            if len(args) != 2:
                raise FormatError("usage: acc <s> <j>", lineno, self.source)
            s = self.state(args[0], lineno)
            j = to_int(args[1], lineno, self.source, "acceptance index")
            if not 1 <= j <= self.k:
                raise FormatError(f"acceptance index {j} outside 1..{self.k}", lineno, self.source)
            self.acc[s] |= 1 << (j - 1)
        else:
            return False
        return True

    def finish(self) -> ExplicitGBA:
        if self.n is None:
            raise FormatError("empty automaton file", None, self.source)
        if self.init is None:
            raise FormatError("missing init line", None, self.source)
        return ExplicitGBA(self.n, self.init, self.succ, self.acc, self.k)


def parse_gba(text: str, source=None) -> ExplicitGBA:
    b = _GraphBuilder(source)
    for lineno, tokens in tokenize(text, source):
        if b.line(lineno, tokens):
            continue
        if tokens[0] == "edge":
            b.need_header(lineno)
            if len(tokens) != 3:
                raise FormatError("usage: edge <u> <v>", lineno, source)
            b.add_edge(b.state(tokens[1], lineno), b.state(tokens[2], lineno), lineno)
        else:
            raise FormatError(f"unknown keyword {tokens[0]!r}", lineno, source)
    return b.finish()


def format_gba(g: ExplicitGBA, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"gba {g.n} {g.k}")
    lines.append(f"init {g.init}")
    for s in range(g.n):
        for j in sorted(acc_indices(g.acc[s])):
            lines.append(f"acc {s} {j}")
    for s, t in g.edges():
        lines.append(f"edge {s} {t}")
    return "\n".join(lines) + "\n"


def load_gba(path) -> ExplicitGBA:
    path = Path(path)
    return parse_gba(path.read_text(), source=str(path))


def save_gba(g: ExplicitGBA, path, comment=None) -> None:
    Path(path).write_text(format_gba(g, comment))

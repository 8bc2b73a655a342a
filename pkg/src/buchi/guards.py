"""Boolean guard expressions over atomic propositions.

Grammar (``!`` binds tighter than ``&``, which binds tighter than ``|``)::

    expr   := term ('|' term)*
    term   := factor ('&' factor)*
    factor := '!' factor | '(' expr ')' | 'true' | 'false' | ident

Binary operators associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import GuardSyntaxError


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "GuardExpr"


@dataclass(frozen=True)
class And:
    left: "GuardExpr"
    right: "GuardExpr"


@dataclass(frozen=True)
class Or:
    left: "GuardExpr"
    right: "GuardExpr"


GuardExpr = Union[Const, Atom, Not, And, Or]

TRUE = Const(True)
FALSE = Const(False)

_TOKEN = re.compile(r"\s*(?:(?P<op>[!&|()])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))")
IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {"true", "false"}


def _lex(text):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise GuardSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start("op") if m.group("op") else m.start("ident")
        tokens.append((m.group("op") or m.group("ident"), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _lex(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise GuardSyntaxError(message, self.tokens[self.i][1], self.text)

    def expr(self):
        node = self.term()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek() == "&":
            self.take()
            node = And(node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.factor())
        if tok == "(":
            self.take()
            node = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return node
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if IDENT.match(tok) and tok != "<end>":
            self.take()
            return Atom(tok)
        if tok == "<end>":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected token {tok!r}")


def parse_guard(text: str) -> GuardExpr:
    p = _Parser(text)
    node = p.expr()
    if p.peek() != "<end>":
        p.fail(f"unexpected token {p.peek()!r}")
    return node


def eval_guard(g: GuardExpr, props) -> bool:
    # Iterative would be overkill: guards come from files and stay shallow.
    if isinstance(g, Atom):
        return g.name in props
    if isinstance(g, Const):
        return g.value
    if isinstance(g, Not):
        return not eval_guard(g.arg, props)
    if isinstance(g, And):
        return eval_guard(g.left, props) and eval_guard(g.right, props)
    if isinstance(g, Or):
        return eval_guard(g.left, props) or eval_guard(g.right, props)
    raise TypeError(f"not a guard expression: {g!r}")


_PREC = {Or: 1, And: 2, Not: 3, Atom: 4, Const: 4}


def format_guard(g: GuardExpr) -> str:
    """Render with the minimal parentheses that re-parse to the same tree."""
    if isinstance(g, Atom):
        return g.name
    if isinstance(g, Const):
        return "true" if g.value else "false"
    if isinstance(g, Not):
        inner = format_guard(g.arg)
        return "!" + (inner if _PREC[type(g.arg)] >= 3 else f"({inner})")
    op = " | " if isinstance(g, Or) else " & "
    prec = _PREC[type(g)]
    left = format_guard(g.left)
    if _PREC[type(g.left)] < prec:
        left = f"({left})"
    right = format_guard(g.right)
    # left associativity: a right operand of equal precedence needs parens
    if _PREC[type(g.right)] <= prec:
        right = f"({right})"
    return left + op + right


def atoms(g: GuardExpr) -> set[str]:
    if isinstance(g, Atom):
        return {g.name}
    if isinstance(g, Const):
        return set()
    if isinstance(g, Not):
        return atoms(g.arg)
    return atoms(g.left) | atoms(g.right)

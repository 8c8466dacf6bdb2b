"""Negation normal formulas over named atoms.

Surface syntax: atoms are identifiers, `~` negates, `!` and `?` are the
branching-repetition pair, `&` and `|` the binaries, `F -> G` elaborates
to `~F | G`.  Prefix operators bind tightest, then `&`, then `|`, then `->`;
binaries associate to the left.  Negation is stored on atoms only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class PosLiteral:
    atom: str


@dataclass(frozen=True)
class NegLiteral:
    atom: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Brec:
    """Resource that the opponent may branch into arbitrarily many copies."""

    body: "Formula"


@dataclass(frozen=True)
class Cobrec:
    body: "Formula"


Formula = Union[PosLiteral, NegLiteral, And, Or, Brec, Cobrec]


class FormulaError(ValueError):
    pass


def negate(f: Formula) -> Formula:
    """Dual formula: swaps literal signs, and/or, and the two repetitions."""
    if isinstance(f, PosLiteral):
        return NegLiteral(f.atom)
    if isinstance(f, NegLiteral):
        return PosLiteral(f.atom)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, Brec):
        return Cobrec(negate(f.body))
    if isinstance(f, Cobrec):
        return Brec(negate(f.body))
    raise TypeError(f"not a formula: {f!r}")


_TOKEN = re.compile(r"\s*(->|[~!?&|()]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            # only whitespace may remain unmatched
            if text[i:].strip():
                bad = len(text) - len(text[i:].lstrip())
                raise FormulaError(f"unexpected character {text[bad]!r} at {bad}")
            break
        toks.append((m.group(1), m.start(1)))
        i = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self) -> tuple[str, int]:
        if self.pos >= len(self.toks):
            raise FormulaError(f"unexpected end of input in {self.text!r}")
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def implication(self) -> Formula:
        f = self.disjunction()
        while self.peek() == "->":
            self.take()
            f = Or(negate(f), self.disjunction())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.prefixed()
        while self.peek() == "&":
            self.take()
            f = And(f, self.prefixed())
        return f

    def prefixed(self) -> Formula:
        tok, at = self.take()
        if tok == "~":
            return negate(self.prefixed())
        if tok == "!":
            return Brec(self.prefixed())
        if tok == "?":
            return Cobrec(self.prefixed())
        if tok == "(":
            f = self.implication()
            tok2, at2 = self.take()
            if tok2 != ")":
                raise FormulaError(f"expected ')' at {at2} in {self.text!r}")
            return f
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return PosLiteral(tok)
        raise FormulaError(f"unexpected token {tok!r} at {at} in {self.text!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.implication()
    if p.pos != len(p.toks):
        tok, at = p.toks[p.pos]
        raise FormulaError(f"trailing token {tok!r} at {at} in {text!r}")
    return f


def _prec(f: Formula) -> int:
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    return 3


def format_formula(f: Formula) -> str:
    """Canonical text with minimal parentheses (left association implied)."""
    if isinstance(f, PosLiteral):
        return f.atom
    if isinstance(f, NegLiteral):
        return "~" + f.atom
    if isinstance(f, (Brec, Cobrec)):
        op = "!" if isinstance(f, Brec) else "?"
        body = format_formula(f.body)
        if _prec(f.body) < 3:
            body = "(" + body + ")"
        return op + body
    op, mine = ("&", 2) if isinstance(f, And) else ("|", 1)
    lt = format_formula(f.left)
    rt = format_formula(f.right)
    if _prec(f.left) < mine:
        lt = "(" + lt + ")"
    if _prec(f.right) <= mine:
        rt = "(" + rt + ")"
    return f"{lt} {op} {rt}"


def subformula_paths(f: Formula) -> list[tuple[str, Formula]]:
    """Preorder listing of (path, node); path steps are '0', '1', 'b'."""
    out: list[tuple[str, Formula]] = []

    def walk(node: Formula, path: str) -> None:
        out.append((path, node))
        if isinstance(node, (And, Or)):
            walk(node.left, path + "0")
            walk(node.right, path + "1")
        elif isinstance(node, (Brec, Cobrec)):
            walk(node.body, path + "b")

    walk(f, "")
    return out


def atoms_of(f: Formula) -> set[str]:
    return {
        node.atom
        for _, node in subformula_paths(f)
        if isinstance(node, (PosLiteral, NegLiteral))
    }

"""Cirquents: sequences of oformulas wired to undergroups and overgroups.

A cirquent is played like the parallel composition of its oformulas, except
that every overgroup spans a branching-copy dimension shared by its members.
A move has the form `a;u1,...,un.rest`: oformula index, one address bitstring
per overgroup, and a move of the indexed oformula's game.  Bitstrings for
overgroups not containing the oformula must be empty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from . import formulas as fm
from . import games as gm
from .games import BOT, TOP, Labmove, Player, Run


class CirquentError(ValueError):
    pass


class ClassCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Cirquent:
    oformulas: tuple[fm.Formula, ...]
    undergroups: tuple[frozenset[int], ...]
    overgroups: tuple[frozenset[int], ...]

    @property
    def width(self) -> int:
        return len(self.oformulas)


def validate_cirquent(c: Cirquent) -> None:
    k = len(c.oformulas)
    if k < 1:
        raise CirquentError("a cirquent needs at least one oformula")
    if not c.undergroups or not c.overgroups:
        raise CirquentError("a cirquent needs at least one group of each kind")
    for kind, groups in (("undergroup", c.undergroups), ("overgroup", c.overgroups)):
        for g in groups:
            if not g:
                raise CirquentError(f"empty {kind}")
            if not all(1 <= i <= k for i in g):
                raise CirquentError(f"{kind} {sorted(g)} references a bad index")
    for i in range(1, k + 1):
        if not any(i in g for g in c.undergroups):
            raise CirquentError(f"oformula {i} is in no undergroup")
        if not any(i in g for g in c.overgroups):
            raise CirquentError(f"oformula {i} is in no overgroup")


def club(f: fm.Formula) -> Cirquent:
    """The one-oformula cirquent with a single group on each side."""
    return Cirquent((f,), (frozenset({1}),), (frozenset({1}),))


# ------------------------------------------------------------- text format
#
# cirquent { oformulas: ["~F", "F"]; under: [[1, 2]]; over: [[1, 2]] }
#
# The reader below also serves the proof file format, so it handles nested
# blocks, lists, strings, integers, and bare words generically.

_BLOCK_TOKEN = re.compile(r'\s*("[^"\n]*"|-?\d+|[A-Za-z_][A-Za-z0-9_]*|[{}\[\]:;,])')


def tokenize_blocks(text: str) -> list[str]:
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    toks, i = [], 0
    while i < len(text):
        m = _BLOCK_TOKEN.match(text, i)
        if m is None:
            if text[i:].strip():
                raise CirquentError(f"bad character near {text[i:i+20]!r}")
            break
        toks.append(m.group(1))
        i = m.end()
    return toks


class BlockReader:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expect: str | None = None) -> str:
        if self.pos >= len(self.toks):
            raise CirquentError("unexpected end of input")
        tok = self.toks[self.pos]
        self.pos += 1
        if expect is not None and tok != expect:
            raise CirquentError(f"expected {expect!r}, got {tok!r}")
        return tok

    def value(self):
        tok = self.take()
        if tok == "[":
            items = []
            while self.peek() != "]":
                items.append(self.value())
                if self.peek() == ",":
                    self.take()
            self.take("]")
            return items
        if tok == "{":
            return self.mapping_body()
        if tok.startswith('"'):
            return tok[1:-1]
        if re.fullmatch(r"-?\d+", tok):
            return int(tok)
        return tok  # bare word

    def mapping_body(self) -> dict:
        # reads `key: value; ...` until the closing brace
        out: dict = {}
        while self.peek() != "}":
            key = self.take()
            self.take(":")
            out[key] = self.value()
            if self.peek() == ";":
                self.take()
        self.take("}")
        return out


def _cirquent_from_fields(fields: dict) -> Cirquent:
    try:
        ofs = tuple(fm.parse_formula(s) for s in fields["oformulas"])
        under = tuple(frozenset(g) for g in fields["under"])
        over = tuple(frozenset(g) for g in fields["over"])
    except (KeyError, TypeError) as e:
        raise CirquentError(f"malformed cirquent fields: {e}") from e
    c = Cirquent(ofs, under, over)
    validate_cirquent(c)
    return c


def parse_cirquent(text: str) -> Cirquent:
    r = BlockReader(tokenize_blocks(text))
    r.take("cirquent")
    r.take("{")
    c = _cirquent_from_fields(r.mapping_body())
    if r.peek() is not None:
        raise CirquentError(f"trailing tokens: {r.toks[r.pos:]}")
    return c


def format_cirquent(c: Cirquent) -> str:
    ofs = ", ".join(f'"{fm.format_formula(f)}"' for f in c.oformulas)
    under = ", ".join("[" + ", ".join(map(str, sorted(g))) + "]" for g in c.undergroups)
    over = ", ".join("[" + ", ".join(map(str, sorted(g))) + "]" for g in c.overgroups)
    return f"cirquent {{ oformulas: [{ofs}]; under: [{under}]; over: [{over}] }}"


# ------------------------------------------------------------------- moves


@dataclass(frozen=True)
class CirquentMove:
    index: int
    slots: tuple[str, ...]
    inner: str


_MOVE = re.compile(r"(\d+);([01,]*)\.(.*)", re.DOTALL)


def parse_move(n_overgroups: int, move: str) -> CirquentMove | None:
    """Shape-only parse; None when the string is not of the right form."""
    m = _MOVE.fullmatch(move)
    if m is None:
        return None
    index = int(m.group(1))
    if index < 1:
        return None
    slots = tuple(m.group(2).split(","))
    if len(slots) != n_overgroups:
        return None
    return CirquentMove(index, slots, m.group(3))


def format_move(mv: CirquentMove) -> str:
    return f"{mv.index};{','.join(mv.slots)}.{mv.inner}"


def respects_membership(c: Cirquent, mv: CirquentMove) -> bool:
    """Overgroups not containing the oformula must get empty addresses."""
    if not 1 <= mv.index <= c.width:
        return False
    return all(
        mv.slots[j] == ""
        for j, group in enumerate(c.overgroups)
        if mv.index not in group
    )


def project_member(c: Cirquent, run: Run, index: int, stems: tuple[str, ...]) -> Run:
    """The run seen by oformula `index` on the copy addressed by `stems`."""
    n = len(c.overgroups)
    out = []
    for lm in run:
        mv = parse_move(n, lm.move)
        if mv is None or mv.index != index:
            continue
        if all(gm.covers(stems[j], mv.slots[j]) for j in range(n)):
            out.append(Labmove(lm.label, mv.inner))
    return tuple(out)


# -------------------------------------------------------- legality, winner


def _games_of(c: Cirquent, interp: Mapping[str, gm.GameNode]) -> list[gm.Game]:
    return [gm.of_formula(f, interp) for f in c.oformulas]


def _class_vectors(c: Cirquent, run: Run, cap: int) -> list[tuple[str, ...]]:
    from itertools import product

    n = len(c.overgroups)
    used: list[set[str]] = [set() for _ in range(n)]
    for lm in run:
        mv = parse_move(n, lm.move)
        if mv is not None:
            for j in range(n):
                used[j].add(mv.slots[j])
    per_slot = [gm.thread_classes(u) for u in used]
    total = 1
    for cl in per_slot:
        total *= len(cl)
    if total > cap:
        raise ClassCapExceeded(f"{total} copy-address classes exceed cap {cap}")
    return list(product(*per_slot))


def _shape_ok(c: Cirquent, move: str) -> bool:
    mv = parse_move(len(c.overgroups), move)
    return mv is not None and respects_membership(c, mv)


def legal(
    c: Cirquent,
    interp: Mapping[str, gm.GameNode],
    run: Run,
    cap: int = 100_000,
) -> bool:
    if not all(_shape_ok(c, lm.move) for lm in run):
        return False
    games = _games_of(c, interp)
    vectors = _class_vectors(c, run, cap)
    for a in range(1, c.width + 1):
        seen: set[Run] = set()
        for vec in vectors:
            proj = project_member(c, run, a, vec)
            if proj in seen:
                continue
            seen.add(proj)
            if not gm.legal(games[a - 1], proj):
                return False
    return True


def first_offender(
    c: Cirquent,
    interp: Mapping[str, gm.GameNode],
    run: Run,
    cap: int = 100_000,
) -> Player | None:
    if legal(c, interp, run, cap):
        return None
    for i in range(len(run)):
        if not legal(c, interp, run[: i + 1], cap):
            return run[i].label
    raise AssertionError("empty run must be legal")


def winner(
    c: Cirquent,
    interp: Mapping[str, gm.GameNode],
    run: Run,
    cap: int = 100_000,
) -> Player:
    off = first_offender(c, interp, run, cap)
    if off is not None:
        return off.other
    games = _games_of(c, interp)
    vectors = _class_vectors(c, run, cap)
    memo: dict[tuple[int, Run], Player] = {}

    def member_winner(a: int, vec: tuple[str, ...]) -> Player:
        proj = project_member(c, run, a, vec)
        key = (a, proj)
        if key not in memo:
            memo[key] = gm.winner(games[a - 1], proj)
        return memo[key]

    for group in c.undergroups:
        for vec in vectors:
            if not any(member_winner(a, vec) is TOP for a in group):
                return BOT
    return TOP


# ----------------------------------------------------------------- diagram


def diagram(c: Cirquent) -> str:
    """Three-row picture: overgroup bullets, oformulas, undergroup bullets."""
    labels = [fm.format_formula(f) for f in c.oformulas]
    centers = []
    col = 0
    for text in labels:
        centers.append(col + len(text) // 2)
        col += len(text) + 3
    width = max(col - 3, 1)
    label_row = (" " * 3).join(labels)

    def bullet_rows(groups: tuple[frozenset[int], ...], above: bool) -> list[str]:
        bullets = []
        taken: set[int] = set()
        for g in groups:
            pos = sum(centers[i - 1] for i in g) // len(g)
            while pos in taken:
                pos += 2
            taken.add(pos)
            bullets.append((pos, g))
        brow = [" "] * (max((p for p, _ in bullets), default=0) + 1)
        arow = [" "] * max(width, len(brow))
        for pos, g in bullets:
            brow[pos] = "*"
            for i in g:
                cm = centers[i - 1]
                mid = (cm + pos) // 2
                if cm == pos:
                    ch = "|"
                elif (cm > pos) == above:
                    ch = "\\"
                else:
                    ch = "/"
                if mid >= len(arow):
                    arow.extend(" " * (mid - len(arow) + 1))
                arow[mid] = ch
        rows = ["".join(brow).rstrip(), "".join(arow).rstrip()]
        return rows if above else rows[::-1]

    out = bullet_rows(c.overgroups, True) + [label_row] + bullet_rows(c.undergroups, False)
    return "\n".join(r for r in out)

"""The deep-inference rules, proof checking, and the proof file format.

A proof is a sequence of steps, each carrying a rule application and the
cirquent it concludes.  Step 1 must be an axiom; for every later step, the
recorded rule applied to the recorded cirquent must reproduce the previous
step's cirquent as its premise.  `premise_of` computes conclusion -> premise
(the checking direction); `conclusion_of` computes premise -> conclusion (the
building direction); each is written independently of the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import formulas as fm
from .cirquents import (
    BlockReader,
    Cirquent,
    CirquentError,
    _cirquent_from_fields,
    format_cirquent,
    tokenize_blocks,
    validate_cirquent,
)


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Axiom:
    formulas: tuple[fm.Formula, ...]


@dataclass(frozen=True)
class UnderExchange:
    pos: int


@dataclass(frozen=True)
class OformulaExchange:
    pos: int


@dataclass(frozen=True)
class OverExchange:
    pos: int


@dataclass(frozen=True)
class Weakening:
    undergroup: int
    oformula: int


@dataclass(frozen=True)
class Contraction:
    oformula: int


@dataclass(frozen=True)
class UnderDuplication:
    pos: int


@dataclass(frozen=True)
class OverDuplication:
    pos: int


@dataclass(frozen=True)
class Merging:
    """pos names the merged overgroup in the conclusion; left/right record how
    the premise splits it, which the conclusion alone does not determine."""

    pos: int
    left: frozenset[int]
    right: frozenset[int]


@dataclass(frozen=True)
class DisjIntro:
    oformula: int


@dataclass(frozen=True)
class ConjIntro:
    oformula: int


@dataclass(frozen=True)
class RecIntro:
    oformula: int
    overgroup: int  # where the premise's fresh singleton overgroup sits


@dataclass(frozen=True)
class CorecIntro:
    oformula: int
    added: frozenset[int]  # overgroups gaining the oformula in the premise


RuleApp = Union[
    Axiom,
    UnderExchange,
    OformulaExchange,
    OverExchange,
    Weakening,
    Contraction,
    UnderDuplication,
    OverDuplication,
    Merging,
    DisjIntro,
    ConjIntro,
    RecIntro,
    CorecIntro,
]

RULE_NAMES: dict[type, str] = {
    Axiom: "Axiom",
    UnderExchange: "UnderExchange",
    OformulaExchange: "OformulaExchange",
    OverExchange: "OverExchange",
    Weakening: "Weakening",
    Contraction: "Contraction",
    UnderDuplication: "UnderDuplication",
    OverDuplication: "OverDuplication",
    Merging: "Merging",
    DisjIntro: "DisjIntro",
    ConjIntro: "ConjIntro",
    RecIntro: "RecIntro",
    CorecIntro: "CorecIntro",
}
RULES_BY_NAME = {name: cls for cls, name in RULE_NAMES.items()}


def axiom_conclusion(formulas: tuple[fm.Formula, ...]) -> Cirquent:
    """n diamonds: dual pairs, each its own undergroup and overgroup."""
    if not formulas:
        raise RuleError("an axiom needs at least one formula")
    ofs: list[fm.Formula] = []
    for f in formulas:
        ofs.extend((fm.negate(f), f))
    groups = tuple(frozenset({2 * i + 1, 2 * i + 2}) for i in range(len(formulas)))
    return Cirquent(tuple(ofs), groups, groups)


# -------------------------------------------------------- index bookkeeping


def _swap(seq: tuple, pos: int, what: str) -> tuple:
    if not 1 <= pos <= len(seq) - 1:
        raise RuleError(f"cannot swap {what} at position {pos} of {len(seq)}")
    lst = list(seq)
    lst[pos - 1], lst[pos] = lst[pos], lst[pos - 1]
    return tuple(lst)


def _shift_up(group: frozenset[int], at: int) -> frozenset[int]:
    """Renumber after inserting a new oformula slot at index `at`."""
    return frozenset(i + 1 if i >= at else i for i in group)


def _shift_down(group: frozenset[int], removed: int) -> frozenset[int]:
    """Renumber after deleting the oformula at index `removed`."""
    return frozenset(i - 1 if i > removed else i for i in group)


def _oformula(c: Cirquent, a: int) -> fm.Formula:
    if not 1 <= a <= c.width:
        raise RuleError(f"oformula index {a} out of range 1..{c.width}")
    return c.oformulas[a - 1]


def _overgroup(c: Cirquent, pos: int) -> frozenset[int]:
    if not 1 <= pos <= len(c.overgroups):
        raise RuleError(f"overgroup position {pos} out of range")
    return c.overgroups[pos - 1]


# ----------------------------------------------------- conclusion -> premise


def premise_of(conclusion: Cirquent, app: RuleApp) -> Cirquent:
    c = conclusion
    if isinstance(app, Axiom):
        raise RuleError("axioms have no premise")

    if isinstance(app, UnderExchange):
        p = Cirquent(c.oformulas, _swap(c.undergroups, app.pos, "undergroups"), c.overgroups)
    elif isinstance(app, OverExchange):
        p = Cirquent(c.oformulas, c.undergroups, _swap(c.overgroups, app.pos, "overgroups"))
    elif isinstance(app, OformulaExchange):
        a = app.pos
        if not 1 <= a <= c.width - 1:
            raise RuleError(f"cannot swap oformulas at position {a} of {c.width}")
        perm = {a: a + 1, a + 1: a}
        p = Cirquent(
            _swap(c.oformulas, a, "oformulas"),
            tuple(frozenset(perm.get(i, i) for i in g) for g in c.undergroups),
            tuple(frozenset(perm.get(i, i) for i in g) for g in c.overgroups),
        )

    elif isinstance(app, Weakening):
        i, a = app.undergroup, app.oformula
        if not 1 <= i <= len(c.undergroups):
            raise RuleError(f"undergroup position {i} out of range")
        group = c.undergroups[i - 1]
        if a not in group:
            raise RuleError(f"no arc between undergroup {i} and oformula {a}")
        if len(group) < 2:
            raise RuleError("cannot delete the only arc of an undergroup")
        under = list(c.undergroups)
        under[i - 1] = group - {a}
        if any(a in g for g in under):
            p = Cirquent(c.oformulas, tuple(under), c.overgroups)
        else:
            # the oformula loses its last undergroup arc and disappears,
            # along with any overgroups that held only it
            ofs = c.oformulas[: a - 1] + c.oformulas[a:]
            new_under = tuple(_shift_down(g, a) for g in under)
            new_over = tuple(
                _shift_down(g - {a}, a) for g in c.overgroups if g != frozenset({a})
            )
            if not new_over:
                raise RuleError("deleting the oformula would leave no overgroups")
            p = Cirquent(ofs, new_under, new_over)

    elif isinstance(app, Contraction):
        a = app.oformula
        f = _oformula(c, a)
        if not isinstance(f, fm.Cobrec):
            raise RuleError(f"contraction needs a '?' oformula at {a}")
        ofs = c.oformulas[: a - 1] + (f, f) + c.oformulas[a:]

        def expand(g: frozenset[int]) -> frozenset[int]:
            base = _shift_up(g, a + 1)
            return base | {a, a + 1} if a in g else base

        p = Cirquent(
            ofs,
            tuple(expand(g) for g in c.undergroups),
            tuple(expand(g) for g in c.overgroups),
        )

    elif isinstance(app, UnderDuplication):
        pos = app.pos
        if not 1 <= pos <= len(c.undergroups) - 1:
            raise RuleError(f"undergroup position {pos} out of range for duplication")
        if c.undergroups[pos - 1] != c.undergroups[pos]:
            raise RuleError(f"undergroups {pos} and {pos + 1} differ")
        p = Cirquent(
            c.oformulas,
            c.undergroups[: pos - 1] + c.undergroups[pos:],
            c.overgroups,
        )
    elif isinstance(app, OverDuplication):
        pos = app.pos
        if not 1 <= pos <= len(c.overgroups) - 1:
            raise RuleError(f"overgroup position {pos} out of range for duplication")
        if c.overgroups[pos - 1] != c.overgroups[pos]:
            raise RuleError(f"overgroups {pos} and {pos + 1} differ")
        p = Cirquent(
            c.oformulas,
            c.undergroups,
            c.overgroups[: pos - 1] + c.overgroups[pos:],
        )

    elif isinstance(app, Merging):
        merged = _overgroup(c, app.pos)
        if not app.left or not app.right:
            raise RuleError("merging parts must be nonempty")
        if app.left | app.right != merged:
            raise RuleError(
                f"split {sorted(app.left)} + {sorted(app.right)} does not "
                f"reassemble overgroup {sorted(merged)}"
            )
        p = Cirquent(
            c.oformulas,
            c.undergroups,
            c.overgroups[: app.pos - 1]
            + (app.left, app.right)
            + c.overgroups[app.pos :],
        )

    elif isinstance(app, DisjIntro):
        a = app.oformula
        f = _oformula(c, a)
        if not isinstance(f, fm.Or):
            raise RuleError(f"disjunction introduction needs a '|' oformula at {a}")
        ofs = c.oformulas[: a - 1] + (f.left, f.right) + c.oformulas[a:]

        def expand(g: frozenset[int]) -> frozenset[int]:
            base = _shift_up(g, a + 1)
            return base | {a, a + 1} if a in g else base

        p = Cirquent(
            ofs,
            tuple(expand(g) for g in c.undergroups),
            tuple(expand(g) for g in c.overgroups),
        )

    elif isinstance(app, ConjIntro):
        a = app.oformula
        f = _oformula(c, a)
        if not isinstance(f, fm.And):
            raise RuleError(f"conjunction introduction needs a '&' oformula at {a}")
        ofs = c.oformulas[: a - 1] + (f.left, f.right) + c.oformulas[a:]

        def expand(g: frozenset[int]) -> frozenset[int]:
            base = _shift_up(g, a + 1)
            return base | {a, a + 1} if a in g else base

        under: list[frozenset[int]] = []
        for g in c.undergroups:
            if a in g:
                base = frozenset(i + 1 if i > a else i for i in g if i != a)
                under.append(base | {a})
                under.append(base | {a + 1})
            else:
                under.append(_shift_up(g, a + 1))
        p = Cirquent(ofs, tuple(under), tuple(expand(g) for g in c.overgroups))

    elif isinstance(app, RecIntro):
        a = app.oformula
        f = _oformula(c, a)
        if not isinstance(f, fm.Brec):
            raise RuleError(f"recurrence introduction needs a '!' oformula at {a}")
        j = app.overgroup
        if not 1 <= j <= len(c.overgroups) + 1:
            raise RuleError(f"overgroup insertion position {j} out of range")
        ofs = c.oformulas[: a - 1] + (f.body,) + c.oformulas[a:]
        over = c.overgroups[: j - 1] + (frozenset({a}),) + c.overgroups[j - 1 :]
        p = Cirquent(ofs, c.undergroups, over)

    elif isinstance(app, CorecIntro):
        a = app.oformula
        f = _oformula(c, a)
        if not isinstance(f, fm.Cobrec):
            raise RuleError(f"corecurrence introduction needs a '?' oformula at {a}")
        over = list(c.overgroups)
        for j in sorted(app.added):
            if not 1 <= j <= len(over):
                raise RuleError(f"overgroup position {j} out of range")
            if a in over[j - 1]:
                raise RuleError(
                    f"oformula {a} is already in overgroup {j}; additions must be new"
                )
            over[j - 1] = over[j - 1] | {a}
        ofs = c.oformulas[: a - 1] + (f.body,) + c.oformulas[a:]
        p = Cirquent(ofs, c.undergroups, tuple(over))

    else:
        raise RuleError(f"unknown rule application {app!r}")

    validate_cirquent(p)
    return p


# ----------------------------------------------------- premise -> conclusion


def conclusion_of(premise: Cirquent, app: RuleApp) -> Cirquent:
    """Forward application, written independently of premise_of."""
    p = premise
    if isinstance(app, Axiom):
        raise RuleError("axioms are introduced, not applied")

    if isinstance(app, UnderExchange):
        c = Cirquent(p.oformulas, _swap(p.undergroups, app.pos, "undergroups"), p.overgroups)
    elif isinstance(app, OverExchange):
        c = Cirquent(p.oformulas, p.undergroups, _swap(p.overgroups, app.pos, "overgroups"))
    elif isinstance(app, OformulaExchange):
        a = app.pos
        if not 1 <= a <= p.width - 1:
            raise RuleError(f"cannot swap oformulas at position {a} of {p.width}")
        perm = {a: a + 1, a + 1: a}
        c = Cirquent(
            _swap(p.oformulas, a, "oformulas"),
            tuple(frozenset(perm.get(i, i) for i in g) for g in p.undergroups),
            tuple(frozenset(perm.get(i, i) for i in g) for g in p.overgroups),
        )

    elif isinstance(app, Weakening):
        # forward weakening only adds an arc to an existing oformula
        i, a = app.undergroup, app.oformula
        if not 1 <= i <= len(p.undergroups):
            raise RuleError(f"undergroup position {i} out of range")
        if not 1 <= a <= p.width:
            raise RuleError(f"oformula index {a} out of range")
        if a in p.undergroups[i - 1]:
            raise RuleError(f"arc between undergroup {i} and oformula {a} already there")
        under = list(p.undergroups)
        under[i - 1] = under[i - 1] | {a}
        c = Cirquent(p.oformulas, tuple(under), p.overgroups)

    elif isinstance(app, Contraction):
        a = app.oformula
        f = _oformula(p, a)
        if a + 1 > p.width or p.oformulas[a] != f or not isinstance(f, fm.Cobrec):
            raise RuleError(f"contraction needs adjacent equal '?' oformulas at {a}")
        for g in p.undergroups + p.overgroups:
            if (a in g) != (a + 1 in g):
                raise RuleError(f"oformulas {a} and {a + 1} are not grouped alike")
        ofs = p.oformulas[: a] + p.oformulas[a + 1 :]
        c = Cirquent(
            ofs,
            tuple(_shift_down(g - {a + 1}, a + 1) for g in p.undergroups),
            tuple(_shift_down(g - {a + 1}, a + 1) for g in p.overgroups),
        )

    elif isinstance(app, UnderDuplication):
        pos = app.pos
        if not 1 <= pos <= len(p.undergroups):
            raise RuleError(f"undergroup position {pos} out of range")
        c = Cirquent(
            p.oformulas,
            p.undergroups[:pos] + (p.undergroups[pos - 1],) + p.undergroups[pos:],
            p.overgroups,
        )
    elif isinstance(app, OverDuplication):
        pos = app.pos
        if not 1 <= pos <= len(p.overgroups):
            raise RuleError(f"overgroup position {pos} out of range")
        c = Cirquent(
            p.oformulas,
            p.undergroups,
            p.overgroups[:pos] + (p.overgroups[pos - 1],) + p.overgroups[pos:],
        )

    elif isinstance(app, Merging):
        pos = app.pos
        if not 1 <= pos <= len(p.overgroups) - 1:
            raise RuleError(f"overgroup position {pos} out of range for merging")
        if p.overgroups[pos - 1] != app.left or p.overgroups[pos] != app.right:
            raise RuleError("recorded split does not match the premise overgroups")
        c = Cirquent(
            p.oformulas,
            p.undergroups,
            p.overgroups[: pos - 1]
            + (app.left | app.right,)
            + p.overgroups[pos + 1 :],
        )

    elif isinstance(app, (DisjIntro, ConjIntro)):
        a = app.oformula
        if a + 1 > p.width:
            raise RuleError(f"need two oformulas at {a}, {a + 1}")
        f, g_ = p.oformulas[a - 1], p.oformulas[a]
        joined: fm.Formula = fm.Or(f, g_) if isinstance(app, DisjIntro) else fm.And(f, g_)
        for grp in p.overgroups:
            if (a in grp) != (a + 1 in grp):
                raise RuleError(f"oformulas {a} and {a + 1} not alike in overgroups")
        ofs = p.oformulas[: a - 1] + (joined,) + p.oformulas[a + 1 :]
        over = tuple(_shift_down(g - {a + 1}, a + 1) for g in p.overgroups)
        if isinstance(app, DisjIntro):
            for grp in p.undergroups:
                if (a in grp) != (a + 1 in grp):
                    raise RuleError(f"oformulas {a} and {a + 1} not alike in undergroups")
            under = tuple(_shift_down(g - {a + 1}, a + 1) for g in p.undergroups)
        else:
            # undergroups touching the pair must come as adjacent siblings
            # (.. a ..), (.. a+1 ..) agreeing everywhere else; each pair
            # collapses to one conclusion group holding the conjunction
            out: list[frozenset[int]] = []
            groups = list(p.undergroups)
            i = 0
            while i < len(groups):
                grp = groups[i]
                if a in grp or a + 1 in grp:
                    if a not in grp or a + 1 in grp:
                        raise RuleError(
                            f"undergroup {i + 1} should hold {a} without {a + 1}"
                        )
                    if i + 1 >= len(groups) or groups[i + 1] != (grp - {a}) | {a + 1}:
                        raise RuleError(
                            f"undergroups {i + 1} and {i + 2} are not siblings"
                        )
                    i += 2
                else:
                    i += 1
                out.append(_shift_down(grp, a + 1))
            under = tuple(out)
        c = Cirquent(ofs, under, over)

    elif isinstance(app, RecIntro):
        a, j = app.oformula, app.overgroup
        if not 1 <= a <= p.width:
            raise RuleError(f"oformula index {a} out of range")
        if not 1 <= j <= len(p.overgroups):
            raise RuleError(f"overgroup position {j} out of range")
        if p.overgroups[j - 1] != frozenset({a}):
            raise RuleError(f"overgroup {j} must contain exactly oformula {a}")
        ofs = p.oformulas[: a - 1] + (fm.Brec(p.oformulas[a - 1]),) + p.oformulas[a:]
        over = p.overgroups[: j - 1] + p.overgroups[j:]
        c = Cirquent(ofs, p.undergroups, over)

    elif isinstance(app, CorecIntro):
        a = app.oformula
        if not 1 <= a <= p.width:
            raise RuleError(f"oformula index {a} out of range")
        over = list(p.overgroups)
        for j in sorted(app.added):
            if not 1 <= j <= len(over):
                raise RuleError(f"overgroup position {j} out of range")
            if a not in over[j - 1]:
                raise RuleError(f"oformula {a} not in overgroup {j} to withdraw from")
            over[j - 1] = over[j - 1] - {a}
        ofs = p.oformulas[: a - 1] + (fm.Cobrec(p.oformulas[a - 1]),) + p.oformulas[a:]
        c = Cirquent(ofs, p.undergroups, tuple(over))

    else:
        raise RuleError(f"unknown rule application {app!r}")

    validate_cirquent(c)
    return c


# ------------------------------------------------------------ proof objects


@dataclass(frozen=True)
class Step:
    app: RuleApp
    cirquent: Cirquent


Proof = tuple[Step, ...]


@dataclass
class Verdict:
    ok: bool
    step: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_proof(proof: Proof) -> Verdict:
    if not proof:
        return Verdict(False, None, "empty proof")
    first = proof[0]
    if not isinstance(first.app, Axiom):
        return Verdict(False, 1, "step 1 must be an axiom")
    try:
        validate_cirquent(first.cirquent)
        if first.cirquent != axiom_conclusion(first.app.formulas):
            return Verdict(False, 1, "step 1 does not match its axiom")
    except (CirquentError, RuleError) as e:
        return Verdict(False, 1, str(e))
    for idx in range(1, len(proof)):
        step = proof[idx]
        if isinstance(step.app, Axiom):
            return Verdict(False, idx + 1, "axiom allowed only at step 1")
        try:
            validate_cirquent(step.cirquent)
            premise = premise_of(step.cirquent, step.app)
        except (CirquentError, RuleError) as e:
            return Verdict(False, idx + 1, str(e))
        if premise != proof[idx - 1].cirquent:
            return Verdict(
                False,
                idx + 1,
                f"premise of step {idx + 1} is not the step {idx} cirquent",
            )
    return Verdict(True, None, f"{len(proof)} steps check")


def infer_rule(prev: Cirquent, nxt: Cirquent) -> list[RuleApp]:
    """All rule applications leading from prev to nxt, params read off the pair."""
    candidates: list[RuleApp] = []
    for pos in range(1, len(nxt.undergroups)):
        candidates.append(UnderExchange(pos))
        candidates.append(UnderDuplication(pos))
    for pos in range(1, len(nxt.overgroups)):
        candidates.append(OverExchange(pos))
        candidates.append(OverDuplication(pos))
    for pos in range(1, nxt.width):
        candidates.append(OformulaExchange(pos))
    for i in range(1, len(nxt.undergroups) + 1):
        for a in sorted(nxt.undergroups[i - 1]):
            candidates.append(Weakening(i, a))
    if len(prev.overgroups) == len(nxt.overgroups) + 1:
        for pos in range(1, len(nxt.overgroups) + 1):
            candidates.append(
                Merging(pos, prev.overgroups[pos - 1], prev.overgroups[pos])
            )
    for a in range(1, nxt.width + 1):
        f = nxt.oformulas[a - 1]
        if isinstance(f, fm.Cobrec):
            candidates.append(Contraction(a))
            if len(prev.overgroups) == len(nxt.overgroups):
                added = frozenset(
                    j
                    for j in range(1, len(nxt.overgroups) + 1)
                    if a in prev.overgroups[j - 1] and a not in nxt.overgroups[j - 1]
                )
                candidates.append(CorecIntro(a, added))
        if isinstance(f, fm.Or):
            candidates.append(DisjIntro(a))
        if isinstance(f, fm.And):
            candidates.append(ConjIntro(a))
        if isinstance(f, fm.Brec):
            for j in range(1, len(prev.overgroups) + 1):
                if prev.overgroups[j - 1] == frozenset({a}):
                    candidates.append(RecIntro(a, j))
    out = []
    for app in candidates:
        try:
            if premise_of(nxt, app) == prev:
                out.append(app)
        except (RuleError, CirquentError):
            pass
    return out


# ------------------------------------------------------------- file format


def _format_params(app: RuleApp) -> str:
    def ints(xs) -> str:
        return "[" + ", ".join(str(i) for i in sorted(xs)) + "]"

    if isinstance(app, Axiom):
        inner = ", ".join(f'"{fm.format_formula(f)}"' for f in app.formulas)
        return f"{{ formulas: [{inner}] }}"
    if isinstance(app, (UnderExchange, OformulaExchange, OverExchange)):
        return f"{{ pos: {app.pos} }}"
    if isinstance(app, Weakening):
        return f"{{ undergroup: {app.undergroup}; oformula: {app.oformula} }}"
    if isinstance(app, (Contraction, DisjIntro, ConjIntro)):
        return f"{{ oformula: {app.oformula} }}"
    if isinstance(app, (UnderDuplication, OverDuplication)):
        return f"{{ pos: {app.pos} }}"
    if isinstance(app, Merging):
        return f"{{ pos: {app.pos}; left: {ints(app.left)}; right: {ints(app.right)} }}"
    if isinstance(app, RecIntro):
        return f"{{ oformula: {app.oformula}; overgroup: {app.overgroup} }}"
    if isinstance(app, CorecIntro):
        return f"{{ oformula: {app.oformula}; added: {ints(app.added)} }}"
    raise RuleError(f"unknown rule application {app!r}")


def _app_from_fields(name: str, params: dict) -> RuleApp:
    try:
        if name == "Axiom":
            return Axiom(tuple(fm.parse_formula(s) for s in params["formulas"]))
        if name in ("UnderExchange", "OformulaExchange", "OverExchange",
                    "UnderDuplication", "OverDuplication"):
            return RULES_BY_NAME[name](int(params["pos"]))
        if name == "Weakening":
            return Weakening(int(params["undergroup"]), int(params["oformula"]))
        if name in ("Contraction", "DisjIntro", "ConjIntro"):
            return RULES_BY_NAME[name](int(params["oformula"]))
        if name == "Merging":
            return Merging(
                int(params["pos"]),
                frozenset(params["left"]),
                frozenset(params["right"]),
            )
        if name == "RecIntro":
            return RecIntro(int(params["oformula"]), int(params["overgroup"]))
        if name == "CorecIntro":
            return CorecIntro(int(params["oformula"]), frozenset(params["added"]))
    except (KeyError, TypeError, ValueError) as e:
        raise RuleError(f"bad params for {name}: {e}") from e
    raise RuleError(f"unknown rule name {name!r}")


def format_proof(proof: Proof) -> str:
    lines = []
    for i, step in enumerate(proof, start=1):
        name = RULE_NAMES[type(step.app)]
        lines.append(f"step {i} {{")
        lines.append(f"  rule: {name};")
        lines.append(f"  params: {_format_params(step.app)};")
        lines.append(f"  cirquent: {format_cirquent(step.cirquent)[len('cirquent '):]};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def parse_proof(text: str) -> Proof:
    r = BlockReader(tokenize_blocks(text))
    steps: list[Step] = []
    expected = 1
    while r.peek() is not None:
        r.take("step")
        num = r.take()
        if not num.isdigit() or int(num) != expected:
            raise RuleError(f"expected step {expected}, found {num!r}")
        expected += 1
        r.take("{")
        fields = r.mapping_body()
        if "rule" not in fields or "cirquent" not in fields:
            raise RuleError(f"step {num} needs rule and cirquent entries")
        app = _app_from_fields(str(fields["rule"]), fields.get("params", {}))
        if not isinstance(fields["cirquent"], dict):
            raise RuleError(f"step {num} cirquent must be a block")
        cirq = _cirquent_from_fields(fields["cirquent"])
        steps.append(Step(app, cirq))
    if not steps:
        raise RuleError("no steps found")
    return tuple(steps)


def conclusion_formula(proof: Proof) -> fm.Formula:
    """The single oformula of a club-shaped final cirquent."""
    last = proof[-1].cirquent
    if last.width != 1 or last.undergroups != (frozenset({1}),) or last.overgroups != (
        frozenset({1}),
    ):
        raise RuleError("the final cirquent does not collapse to a single formula")
    return last.oformulas[0]

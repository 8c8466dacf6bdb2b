"""Rule applications, read in both directions.

`premise_of` reconstructs a step's premise from its conclusion (that is what
checking needs); `conclusion_of` pushes a premise forward. The two were
written against the rule definitions separately, so the round-trip tests over
the corpus proofs cross-validate them.
"""

from pathlib import Path

import pytest

from cirquent import rules as R
from cirquent.cirquents import Cirquent, club, validate_cirquent
from cirquent.formulas import parse_formula

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
CASES = sorted(p.name for p in CORPUS.iterdir() if (p / "proof.cl15").exists())


def load(name: str) -> R.Proof:
    return R.parse_proof((CORPUS / name / "proof.cl15").read_text())


def cq(oformulas, under, over) -> Cirquent:
    c = Cirquent(
        tuple(parse_formula(s) for s in oformulas),
        tuple(frozenset(g) for g in under),
        tuple(frozenset(g) for g in over),
    )
    validate_cirquent(c)
    return c


def test_corpus_is_present():
    assert len(CASES) == 7


@pytest.mark.parametrize("name", CASES)
def test_corpus_proofs_check(name):
    proof = load(name)
    verdict = R.check_proof(proof)
    assert verdict, f"step {verdict.step}: {verdict.message}"


@pytest.mark.parametrize("name", CASES)
def test_proof_text_round_trip(name):
    proof = load(name)
    assert R.parse_proof(R.format_proof(proof)) == proof


@pytest.mark.parametrize("name", CASES)
def test_premise_and_conclusion_agree(name):
    proof = load(name)
    intro_weakenings = 0
    for prev, step in zip(proof, proof[1:]):
        assert R.premise_of(step.cirquent, step.app) == prev.cirquent
        try:
            forward = R.conclusion_of(prev.cirquent, step.app)
        except R.RuleError:
            # weakening that introduces an oformula: the conclusion holds
            # strictly more than the rule parameters, so only the checking
            # direction can rebuild it
            assert isinstance(step.app, R.Weakening)
            intro_weakenings += 1
            continue
        assert forward == step.cirquent
    assert intro_weakenings <= 1


@pytest.mark.parametrize("name", CASES)
def test_infer_rule_recovers_each_step(name):
    proof = load(name)
    for prev, step in zip(proof, proof[1:]):
        apps = R.infer_rule(prev.cirquent, step.cirquent)
        assert apps, f"no rule found for {step.app}"
        assert any(type(a) is type(step.app) for a in apps)
        for app in apps:
            assert R.premise_of(step.cirquent, app) == prev.cirquent


def test_axiom_shape():
    got = R.axiom_conclusion((parse_formula("E"), parse_formula("F")))
    assert got == cq(["~E", "E", "~F", "F"], [{1, 2}, {3, 4}], [{1, 2}, {3, 4}])


def test_axiom_negates_structurally():
    got = R.axiom_conclusion((parse_formula("!(E | F)"),))
    assert got.oformulas[0] == parse_formula("?(~E & ~F)")


def test_weakening_deletes_arc_only():
    c = cq(["~F", "F", "F"], [{1, 2, 3}], [{1, 2, 3}])
    got = R.premise_of(c, R.Weakening(undergroup=1, oformula=2))
    assert got == cq(["~F", "F"], [{1, 2}], [{1, 2}])


def test_weakening_cascade_drops_orphaned_overgroups():
    c = cq(["F", "G"], [{1}, {1, 2}], [{1}, {2}, {1, 2}])
    got = R.premise_of(c, R.Weakening(undergroup=2, oformula=2))
    assert got == cq(["F"], [{1}, {1}], [{1}, {1}])


def test_weakening_requires_company():
    # an undergroup must keep at least one member
    c = cq(["~F", "F"], [{1}, {2}], [{1, 2}])
    with pytest.raises(R.RuleError):
        R.premise_of(c, R.Weakening(undergroup=1, oformula=1))


def test_contraction_needs_identical_wiring():
    c = cq(["?F", "G"], [{1, 2}], [{1, 2}])
    got = R.premise_of(c, R.Contraction(1))
    assert got == cq(["?F", "?F", "G"], [{1, 2, 3}], [{1, 2, 3}])
    with pytest.raises(R.RuleError):
        R.premise_of(cq(["F", "G"], [{1, 2}], [{1, 2}]), R.Contraction(1))


def test_conj_intro_splits_every_undergroup_through_the_pair():
    c = cq(["~F", "F & G"], [{1, 2}], [{1, 2}])
    got = R.premise_of(c, R.ConjIntro(2))
    assert got == cq(["~F", "F", "G"], [{1, 2}, {1, 3}], [{1, 2, 3}])


def test_rec_intro_restores_a_singleton_overgroup():
    c = cq(["!F"], [{1}], [{1}])
    got = R.premise_of(c, R.RecIntro(oformula=1, overgroup=1))
    assert got == cq(["F"], [{1}], [{1}, {1}])
    wide = cq(["!F", "G"], [{1, 2}], [{1, 2}])
    got = R.premise_of(wide, R.RecIntro(oformula=1, overgroup=2))
    assert got == cq(["F", "G"], [{1, 2}], [{1, 2}, {1}])
    with pytest.raises(R.RuleError):
        R.premise_of(wide, R.RecIntro(oformula=2, overgroup=1))


def test_corec_intro_restores_the_dropped_memberships():
    # the premise holds the oformula in the added overgroups; the conclusion
    # wraps it in '?' and withdraws those arcs
    c = cq(["?F", "G"], [{1, 2}], [{1, 2}, {2}])
    got = R.premise_of(c, R.CorecIntro(oformula=1, added=frozenset({2})))
    assert got == cq(["F", "G"], [{1, 2}], [{1, 2}, {1, 2}])
    with pytest.raises(R.RuleError):
        # overgroup 1 already holds oformula 1
        R.premise_of(c, R.CorecIntro(oformula=1, added=frozenset({1})))


def test_merging_checks_the_recorded_split():
    c = cq(["~F", "F"], [{1, 2}], [{1, 2}])
    app = R.Merging(1, frozenset({1}), frozenset({2}))
    assert R.premise_of(c, app) == cq(["~F", "F"], [{1, 2}], [{1}, {2}])
    # overlapping premise groups are fine, but their union must come out right
    bad = R.Merging(1, frozenset({1}), frozenset({1}))
    with pytest.raises(R.RuleError):
        R.premise_of(c, bad)


def test_check_rejects_a_tampered_step():
    proof = load("brec_split")
    steps = list(proof)
    # swap one contraction target; everything downstream stops lining up
    broken = steps[:4] + steps[5:]
    renumbered = tuple(R.Step(s.app, s.cirquent) for s in broken)
    assert not R.check_proof(renumbered)


def test_check_rejects_axiom_after_the_first_step():
    proof = load("brec_elim")
    extra = proof + (R.Step(R.Axiom((parse_formula("F"),)), proof[0].cirquent),)
    assert not R.check_proof(extra)


def test_check_requires_an_axiom_start():
    proof = load("brec_elim")
    assert not R.check_proof(proof[1:])


def test_parse_proof_rejects_bad_numbering():
    text = R.format_proof(load("brec_elim"))
    with pytest.raises(R.RuleError):
        R.parse_proof(text.replace("step 2", "step 7", 1))


def test_conclusion_formula_requires_a_club():
    proof = load("and_elim")
    assert R.conclusion_formula(proof) == parse_formula("(~F | ~F) | F")
    with pytest.raises(R.RuleError):
        R.conclusion_formula(proof[:-1])

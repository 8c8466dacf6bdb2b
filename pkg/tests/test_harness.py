from pathlib import Path

import pytest

from cirquent import rules as R
from cirquent.formulas import parse_formula
from cirquent.games import BOT, TOP, Labmove, Tree, of_formula, parse_game
from cirquent.harness import (
    CapExceeded,
    FormulaArena,
    CirquentArena,
    RandomEnv,
    ScriptedEnv,
    SpoilerEnv,
    exhaustive_env_check,
    play,
    run_corpus,
    winnability,
)
from cirquent.strategies import Transducer, cirquent_strategy_factories, compile_proof

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
RELAY = parse_game('node winner=T { B"q" -> node winner=B { T"a" -> node winner=T {} } }')
PITFALL = parse_game("node winner=B {}")
INTERP = {"F": RELAY, "P": PITFALL}


def arena_for(text: str) -> FormulaArena:
    return FormulaArena(of_formula(parse_formula(text), INTERP))


class Silent(Transducer):
    def step(self, observed):
        return []


class Answerer(Transducer):
    """Answers q with a in the bare relay game."""

    def __init__(self):
        self._seen = 0

    def step(self, observed):
        out = []
        for lm in observed[self._seen:]:
            if lm.label is BOT and lm.move == "q":
                out.append("a")
        self._seen = len(observed) + len(out)
        return out


class Spammer(Transducer):
    def step(self, observed):
        return ["q"] * 10


def test_play_scripted():
    result = play(Answerer(), ScriptedEnv(["q"]), FormulaArena(Tree(RELAY)))
    assert result.won
    assert result.run == (Labmove(BOT, "q"), Labmove(TOP, "a"))


def test_play_scripted_pass_keeps_the_game_open():
    result = play(Answerer(), ScriptedEnv([None, "q"]), FormulaArena(Tree(RELAY)))
    assert result.won


def test_play_budget_truncation_is_inconclusive():
    result = play(Spammer(), ScriptedEnv([]), FormulaArena(Tree(RELAY)), budget=8)
    assert result.inconclusive
    assert not result.won
    assert len(result.run) == 8


def test_frontier_is_legal_and_sorted():
    arena = arena_for("F | F")
    assert arena.frontier((), BOT) == ["0.q", "1.q"]
    assert arena.frontier((), TOP) == []
    run = (Labmove(BOT, "0.q"),)
    assert arena.frontier(run, TOP) == ["0.a"]


def test_random_env_is_seed_deterministic():
    arena = arena_for("!F")

    def rollout(seed: int):
        env = RandomEnv(seed=seed, max_moves=4)
        moves = []
        run = ()
        for _ in range(6):
            block = env.next_moves(arena, run)
            moves.extend(block)
            run = run + tuple(Labmove(BOT, m) for m in block)
        return moves

    assert rollout(3) == rollout(3)
    trails = {tuple(rollout(s)) for s in range(12)}
    assert len(trails) > 1


def test_spoiler_punishes_silence():
    result = play(Silent(), SpoilerEnv(), FormulaArena(Tree(RELAY)))
    assert result.winner is BOT
    assert result.run == (Labmove(BOT, "q"),)


def test_spoiler_cannot_beat_an_answerer():
    result = play(Answerer(), SpoilerEnv(), FormulaArena(Tree(RELAY)))
    assert result.won


def test_exhaustive_check_finds_the_losing_line():
    ok, witness = exhaustive_env_check(Silent, FormulaArena(Tree(RELAY)))
    assert not ok
    assert witness == (Labmove(BOT, "q"),)
    ok, witness = exhaustive_env_check(Answerer, FormulaArena(Tree(RELAY)))
    assert ok and witness is None


def test_exhaustive_check_rejects_a_babbling_machine():
    with pytest.raises(CapExceeded):
        exhaustive_env_check(Spammer, FormulaArena(Tree(RELAY)), budget=16)


def test_winnability_frozen():
    assert winnability(arena_for("F"), max_moves=4)
    assert winnability(arena_for("F | ~F"), max_moves=4)
    assert not winnability(arena_for("F & ~F"), max_moves=4)
    assert not winnability(arena_for("P"), max_moves=4)
    assert winnability(arena_for("~P"), max_moves=4)
    assert not winnability(arena_for("P | P"), max_moves=4)
    assert winnability(arena_for("P -> P"), max_moves=4)


def test_winnability_through_replication():
    assert winnability(arena_for("!F"), max_moves=4, limit=1)
    assert not winnability(arena_for("?P"), max_moves=4, limit=1)


def test_cirquent_arena_plays_step_strategies():
    proof = R.parse_proof((CORPUS / "brec_split" / "proof.cl15").read_text())
    pairs = cirquent_strategy_factories(proof)
    for c, factory in pairs[:3]:
        arena = CirquentArena(c, INTERP)
        for seed in range(5):
            result = play(factory(), RandomEnv(seed=seed, max_moves=3), arena)
            assert result.won, (c, seed, result.run)


def test_run_corpus_all_pass():
    reports = run_corpus(CORPUS)
    assert len(reports) == 7
    for r in reports:
        assert r.ok, r.line()
        assert r.wins > 0 and r.losses == 0 and r.inconclusive == 0
        assert "PASS" in r.line()


def test_compiled_strategy_survives_junk_probes():
    proof = R.parse_proof((CORPUS / "brec_elim" / "proof.cl15").read_text())
    compiled = compile_proof(proof)
    arena = arena_for("?~F | F")
    env = RandomEnv(seed=1, junk_rate=1.0, pass_rate=0.0, max_moves=3)
    result = play(compiled.fresh(), env, arena)
    assert result.won  # junk makes the environment the first offender

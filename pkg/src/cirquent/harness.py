"""Playing strategies against environments and measuring who wins.

Arenas wrap a game (formula-level or cirquent-level) behind a uniform
interface: winner, offender, and a finitized frontier of legal moves for a
player, with copy addresses capped at a given length.  Environment policies
draw opponent moves; play() alternates environment and machine blocks until
both go quiet or the labmove budget runs out.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import cirquents as cq
from . import formulas as fm
from . import games as gm
from .games import BOT, TOP, Labmove, Player, Run
from .rules import check_proof, conclusion_formula, parse_proof
from .strategies import CompiledStrategy, Transducer, compile_proof

JUNK_MOVE = "?!junk"


class CapExceeded(RuntimeError):
    pass


def _addresses(limit: int) -> list[str]:
    out = [""]
    frontier = [""]
    for _ in range(limit):
        frontier = [w + b for w in frontier for b in "01"]
        out.extend(frontier)
    return out


def _game_candidates(g: gm.Game, run: Run, player: Player, limit: int) -> set[str]:
    if isinstance(g, gm.Tree):
        node = gm.walk(g.root, run)
        if node is None:
            return set()
        return {m for lab, m, _ in node.edges if lab is player}
    if isinstance(g, gm.Neg):
        return _game_candidates(g.sub, gm.negate_run(run), player.other, limit)
    if isinstance(g, (gm.Conj, gm.Disj)):
        left = _game_candidates(g.left, gm.project_prefix(run, "0."), player, limit)
        right = _game_candidates(g.right, gm.project_prefix(run, "1."), player, limit)
        return {"0." + m for m in left} | {"1." + m for m in right}
    if isinstance(g, (gm.Rep, gm.Corep)):
        out: set[str] = set()
        for w in _addresses(limit):
            sub = _game_candidates(g.sub, gm.project_thread(run, w), player, limit)
            out.update(w + "." + m for m in sub)
        return out
    raise TypeError(f"not a game: {g!r}")


@dataclass
class FormulaArena:
    game: gm.Game

    def winner(self, run: Run) -> Player:
        return gm.winner(self.game, run)

    def offender(self, run: Run) -> Player | None:
        return gm.first_offender(self.game, run)

    def legal(self, run: Run) -> bool:
        return gm.legal(self.game, run)

    def frontier(self, run: Run, player: Player, limit: int = 2) -> list[str]:
        cands = _game_candidates(self.game, run, player, limit)
        return sorted(
            m for m in cands if gm.legal(self.game, run + (Labmove(player, m),))
        )


@dataclass
class CirquentArena:
    cirquent: cq.Cirquent
    interp: Mapping[str, gm.GameNode]
    cap: int = 100_000

    def winner(self, run: Run) -> Player:
        return cq.winner(self.cirquent, self.interp, run, self.cap)

    def offender(self, run: Run) -> Player | None:
        return cq.first_offender(self.cirquent, self.interp, run, self.cap)

    def legal(self, run: Run) -> bool:
        return cq.legal(self.cirquent, self.interp, run, self.cap)

    def frontier(self, run: Run, player: Player, limit: int = 1) -> list[str]:
        from itertools import product

        c = self.cirquent
        n = len(c.overgroups)
        games = [gm.of_formula(f, self.interp) for f in c.oformulas]
        cands: set[str] = set()
        for a in range(1, c.width + 1):
            slot_options = [
                _addresses(limit) if a in c.overgroups[j] else [""]
                for j in range(n)
            ]
            for slots in product(*slot_options):
                proj = cq.project_member(c, run, a, slots)
                for m in _game_candidates(games[a - 1], proj, player, limit):
                    cands.add(cq.format_move(cq.CirquentMove(a, slots, m)))
        return sorted(
            m
            for m in cands
            if cq.legal(self.cirquent, self.interp, run + (Labmove(player, m),), self.cap)
        )


# ------------------------------------------------------------ environments


class EnvPolicy:
    def next_moves(self, arena, run: Run) -> list[str]:
        raise NotImplementedError


class RandomEnv(EnvPolicy):
    """Seeded random opponent: passes sometimes, occasionally probes with an
    ill-formed move, otherwise samples the legal frontier."""

    def __init__(self, seed: int, max_moves: int = 6, limit: int = 2,
                 pass_rate: float = 0.2, junk_rate: float = 0.05):
        self.rng = random.Random(seed)
        self.left = max_moves
        self.limit = limit
        self.pass_rate = pass_rate
        self.junk_rate = junk_rate

    def next_moves(self, arena, run: Run) -> list[str]:
        if self.left <= 0:
            return []
        roll = self.rng.random()
        if roll < self.pass_rate:
            return []
        self.left -= 1
        if roll < self.pass_rate + self.junk_rate:
            return [JUNK_MOVE]
        cands = arena.frontier(run, BOT, self.limit)
        if not cands:
            return []
        return [self.rng.choice(cands)]


class ScriptedEnv(EnvPolicy):
    """Plays a fixed move list, one per turn; None entries pass a turn."""

    def __init__(self, moves: Sequence[str | None]):
        self.moves = list(moves)
        self.at = 0

    def next_moves(self, arena, run: Run) -> list[str]:
        if self.at >= len(self.moves):
            return []
        m = self.moves[self.at]
        self.at += 1
        return [] if m is None else [m]


class SpoilerEnv(EnvPolicy):
    """Adversarial opponent: bounded lookahead over its own continuations,
    steering toward positions the machine is currently losing."""

    def __init__(self, depth: int = 2, max_moves: int = 6, limit: int = 1,
                 branch_cap: int = 48):
        self.depth = depth
        self.left = max_moves
        self.limit = limit
        self.branch_cap = branch_cap

    def _probe(self, arena, run: Run, d: int) -> int:
        score = 1 if arena.winner(run) is TOP else 0
        if score == 0 or d <= 0:
            return score
        for m in arena.frontier(run, BOT, self.limit)[: self.branch_cap]:
            score = min(score, self._probe(arena, run + (Labmove(BOT, m),), d - 1))
            if score == 0:
                break
        return score

    def next_moves(self, arena, run: Run) -> list[str]:
        if self.left <= 0:
            return []
        cands = arena.frontier(run, BOT, self.limit)[: self.branch_cap]
        if not cands:
            return []
        self.left -= 1
        best = min(
            cands,
            key=lambda m: (self._probe(arena, run + (Labmove(BOT, m),), self.depth - 1), m),
        )
        return [best]


# ------------------------------------------------------------------- play


@dataclass
class PlayResult:
    run: Run
    winner: Player
    offender: Player | None
    inconclusive: bool
    rounds: int

    @property
    def won(self) -> bool:
        return self.winner is TOP and not self.inconclusive


def play(t: Transducer, env: EnvPolicy, arena, budget: int = 64) -> PlayResult:
    run: list[Labmove] = []
    inconclusive = False
    rounds = 0
    while True:
        rounds += 1
        env_moves = env.next_moves(arena, tuple(run)) if len(run) < budget else []
        for m in env_moves:
            if len(run) < budget:
                run.append(Labmove(BOT, m))
        block = t.step(tuple(run))
        if len(run) + len(block) > budget:
            for m in block[: budget - len(run)]:
                run.append(Labmove(TOP, m))
            inconclusive = True
            break
        for m in block:
            run.append(Labmove(TOP, m))
        if not env_moves and not block:
            break
        if rounds > 4 * budget:
            inconclusive = True
            break
    final = tuple(run)
    return PlayResult(final, arena.winner(final), arena.offender(final),
                      inconclusive, rounds)


def exhaustive_env_check(
    factory,
    arena,
    env_depth: int = 2,
    limit: int = 2,
    budget: int = 64,
    node_cap: int = 500_000,
) -> tuple[bool, Run | None]:
    """Replay the strategy against every legal environment line (with passes)
    up to env_depth opponent moves; returns (all positions won, witness)."""
    nodes = 0

    def poll(t: Transducer, run: Run) -> Run:
        for _ in range(16):
            block = t.step(run)
            if not block:
                return run
            run = run + tuple(Labmove(TOP, m) for m in block)
            if len(run) > budget:
                raise CapExceeded("machine exceeded the labmove budget")
        raise CapExceeded("machine would not quiesce")

    def replay(schedule: list[str]) -> Run:
        t = factory()
        run = poll(t, ())
        for m in schedule:
            run = run + (Labmove(BOT, m),)
            run = poll(t, run)
        return run

    def rec(schedule: list[str]) -> Run | None:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise CapExceeded(f"exhaustive check exceeded {node_cap} nodes")
        run = replay(schedule)
        if arena.winner(run) is not TOP:
            return run
        if len(schedule) < env_depth:
            for m in arena.frontier(run, BOT, limit):
                witness = rec(schedule + [m])
                if witness is not None:
                    return witness
        return None

    witness = rec([])
    return witness is None, witness


def winnability(arena, max_moves: int, limit: int = 2,
                node_cap: int = 500_000) -> bool:
    """Bounded double-sided search: can the machine force a won position
    within the move budget, letting either side pass?"""
    nodes = 0

    def bump() -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise CapExceeded(f"winnability search exceeded {node_cap} nodes")

    def top_turn(run: Run, k: int) -> bool:
        bump()
        if k > 0:
            for m in arena.frontier(run, TOP, limit):
                if bot_turn(run + (Labmove(TOP, m),), k - 1, False):
                    return True
        return bot_turn(run, k, True)

    def bot_turn(run: Run, k: int, top_passed: bool) -> bool:
        bump()
        if k > 0:
            for m in arena.frontier(run, BOT, limit):
                if not top_turn(run + (Labmove(BOT, m),), k - 1):
                    return False
        if top_passed:
            return arena.winner(run) is TOP
        return top_turn(run, k)

    return top_turn((), max_moves)


# ------------------------------------------------------------------ corpus


@dataclass
class CaseReport:
    name: str
    ok: bool
    check_ok: bool
    formula: str = ""
    wins: int = 0
    losses: int = 0
    inconclusive: int = 0
    message: str = ""

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        detail = self.message or (
            f"{self.wins} won, {self.losses} lost, {self.inconclusive} inconclusive"
        )
        return f"{mark} {self.name}: {detail}"


def load_interpretation(path: Path, atoms: set[str]) -> dict[str, gm.GameNode]:
    lib = gm.parse_game_library(path.read_text())
    missing = atoms - set(lib)
    if missing:
        raise KeyError(f"{path} assigns no game to atoms {sorted(missing)}")
    return {a: lib[a] for a in atoms} | {k: v for k, v in lib.items()}


def run_case(case_dir: Path, budget: int | None = None) -> CaseReport:
    name = case_dir.name
    expect = json.loads((case_dir / "expect.json").read_text())
    proof = parse_proof((case_dir / "proof.cl15").read_text())
    verdict = check_proof(proof)
    want_check = expect.get("check", "ok") == "ok"
    if not verdict:
        ok = not want_check
        return CaseReport(name, ok, False,
                          message=f"step {verdict.step}: {verdict.message}")
    if not want_check:
        return CaseReport(name, False, True, message="expected the check to fail")

    formula = conclusion_formula(proof)
    compiled = compile_proof(proof)
    atoms = fm.atoms_of(formula)
    interp = load_interpretation(case_dir / "atoms.game", atoms)
    arena = FormulaArena(gm.of_formula(formula, interp))

    roll = expect.get("rollouts", {})
    seeds = int(roll.get("seeds", 25))
    env_moves = int(roll.get("env_moves", 6))
    use_budget = budget or int(roll.get("budget", 64))
    wins = losses = inconclusive = 0
    for seed in range(seeds):
        result = play(compiled.fresh(), RandomEnv(seed, env_moves), arena, use_budget)
        if result.inconclusive:
            inconclusive += 1
        elif result.winner is TOP:
            wins += 1
        else:
            losses += 1
    ok = losses == 0 and inconclusive == 0 if expect.get("win_all", True) else True
    return CaseReport(name, ok, True, fm.format_formula(formula),
                      wins, losses, inconclusive)


def run_corpus(root: Path, budget: int | None = None) -> list[CaseReport]:
    reports = []
    for case_dir in sorted(p for p in root.iterdir() if (p / "proof.cl15").exists()):
        reports.append(run_case(case_dir, budget))
    return reports

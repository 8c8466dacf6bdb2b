"""Sweep every corpus strategy across atom libraries and environments.

Prints one row per (case, library, environment family) with win counts and
run-length statistics. Useful for eyeballing how much of the move budget
the compiled strategies actually need before tightening harness caps.
Run from the repository root: python3 scripts/rollout_stats.py [seeds]
"""

from __future__ import annotations

import sys
import time
from pathlib import Path
from statistics import mean

from cirquent.formulas import atoms_of
from cirquent.games import of_formula, parse_game_library
from cirquent.harness import FormulaArena, RandomEnv, SpoilerEnv, play
from cirquent.rules import parse_proof
from cirquent.strategies import compile_proof

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def sweep(seeds: int) -> int:
    libraries = {
        p.stem: parse_game_library(p.read_text())
        for p in sorted((CORPUS / "atoms").glob("*.game"))
    }
    failures = 0
    print(f"{'case':<14} {'library':<9} {'game':<8} {'env':<8} "
          f"{'won':>5} {'len avg':>8} {'len max':>7}")
    for case in sorted(p.name for p in CORPUS.iterdir() if (p / "proof.cl15").exists()):
        compiled = compile_proof(parse_proof((CORPUS / case / "proof.cl15").read_text()))
        atoms = atoms_of(compiled.formula)
        for lib_name, lib in libraries.items():
            for game_name, node in sorted(lib.items()):
                arena = FormulaArena(of_formula(compiled.formula, {a: node for a in atoms}))
                envs = {
                    "random": [RandomEnv(seed=s) for s in range(seeds)],
                    "spoiler": [SpoilerEnv(depth=2)],
                }
                for env_name, policies in envs.items():
                    won, lengths = 0, []
                    for env in policies:
                        res = play(compiled.fresh(), env, arena, budget=64)
                        won += res.won and not res.inconclusive
                        lengths.append(len(res.run))
                    if won < len(policies):
                        failures += 1
                    print(f"{case:<14} {lib_name:<9} {game_name:<8} {env_name:<8} "
                          f"{won:>3}/{len(policies):<3} {mean(lengths):>8.1f} "
                          f"{max(lengths):>7}")
    return failures


def main() -> int:
    seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    t0 = time.monotonic()
    failures = sweep(seeds)
    print(f"\n{failures} failing rows, {time.monotonic() - t0:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

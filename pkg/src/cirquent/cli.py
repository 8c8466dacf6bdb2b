"""Command line front end.

Exit codes: 0 success (or machine win), 1 failed check or lost play,
2 usage and parse errors, 3 blown enumeration caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from cirquent import cirquents as cq
from cirquent import formulas as fm
from cirquent import games as gm
from cirquent import harness as hn
from cirquent import rules as rl
from cirquent.fusion import FusionCapExceeded, defusion, fusions
from cirquent.games import BOT, TOP
from cirquent.strategies import compile_proof

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read_proof(path: str) -> rl.Proof:
    try:
        return rl.parse_proof(Path(path).read_text())
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")
    except (rl.RuleError, cq.CirquentError, fm.FormulaError) as e:
        raise CliError(f"{path}: {e}")


def _read_library(path: str) -> dict[str, gm.GameNode]:
    try:
        return gm.parse_game_library(Path(path).read_text())
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")
    except gm.GameError as e:
        raise CliError(f"{path}: {e}")


def _interp_for(formula: fm.Formula, lib: dict[str, gm.GameNode]):
    missing = sorted(fm.atoms_of(formula) - set(lib))
    if missing:
        raise CliError(f"library assigns no game to atoms: {', '.join(missing)}")
    return lib


def cmd_check(args) -> int:
    proof = _read_proof(args.proof)
    verdict = rl.check_proof(proof)
    if verdict:
        formula = fm.format_formula(rl.conclusion_formula(proof))
        print(f"ok: {len(proof)} steps, concludes {formula}")
        return EXIT_OK
    print(f"step {verdict.step}: {verdict.message}")
    return EXIT_FAIL


def cmd_compile(args) -> int:
    proof = _read_proof(args.proof)
    verdict = rl.check_proof(proof)
    if not verdict:
        print(f"step {verdict.step}: {verdict.message}", file=sys.stderr)
        return EXIT_FAIL
    compiled = compile_proof(proof)
    if args.out:
        Path(args.out).write_text(compiled.bundle + "\n")
    else:
        print(compiled.bundle)
    print(f"strategy for {fm.format_formula(compiled.formula)}", file=sys.stderr)
    return EXIT_OK


def cmd_play(args) -> int:
    proof = _read_proof(args.proof)
    verdict = rl.check_proof(proof)
    if not verdict:
        print(f"step {verdict.step}: {verdict.message}", file=sys.stderr)
        return EXIT_FAIL
    compiled = compile_proof(proof)
    lib = _interp_for(compiled.formula, _read_library(args.atoms))
    arena = hn.FormulaArena(gm.of_formula(compiled.formula, lib))
    if args.moves is not None:
        script = [m if m else None for m in args.moves.split(",")]
        env: hn.EnvPolicy = hn.ScriptedEnv(script)
    elif args.spoiler:
        env = hn.SpoilerEnv()
    else:
        env = hn.RandomEnv(seed=args.seed)
    result = hn.play(compiled.fresh(), env, arena, budget=args.budget)
    for lm in result.run:
        print(f"  {lm.label}: {lm.move}")
    if result.inconclusive:
        print(f"inconclusive after {len(result.run)} moves (budget {args.budget})")
        return EXIT_FAIL
    print(f"winner: {result.winner}")
    return EXIT_OK if result.winner is TOP else EXIT_FAIL


def _parse_run_arg(text: str | None):
    if not text:
        return ()
    try:
        return gm.parse_run(text)
    except gm.GameError as e:
        raise CliError(str(e))


def cmd_eval(args) -> int:
    if (args.formula is None) == (args.cirquent is None):
        raise CliError("need exactly one of --formula or --cirquent")
    run = _parse_run_arg(args.run)
    lib = _read_library(args.atoms)
    try:
        if args.formula is not None:
            f = fm.parse_formula(args.formula)
            game = gm.of_formula(f, _interp_for(f, lib))
            offender = gm.first_offender(game, run)
            won_by = gm.winner(game, run)
        else:
            # a literal always starts with the keyword; anything else is a path
            text = args.cirquent
            if not text.lstrip().startswith("cirquent"):
                try:
                    text = Path(text).read_text()
                except OSError as e:
                    raise CliError(f"cannot read {args.cirquent}: {e}")
            c = cq.parse_cirquent(text)
            for f in c.oformulas:
                _interp_for(f, lib)
            print(cq.diagram(c))
            offender = cq.first_offender(c, lib, run)
            won_by = cq.winner(c, lib, run)
    except (fm.FormulaError, cq.CirquentError) as e:
        raise CliError(str(e))
    except cq.ClassCapExceeded as e:
        raise CliError(str(e), EXIT_CAP)
    if offender is None:
        print("run: legal")
    else:
        print(f"run: illegal, first offender {offender}")
    print(f"winner: {won_by}")
    return EXIT_OK


def cmd_fuse(args) -> int:
    try:
        for z in fusions(tuple(args.bits)):
            print(z)
    except ValueError as e:
        raise CliError(str(e))
    except FusionCapExceeded as e:
        raise CliError(str(e), EXIT_CAP)
    return EXIT_OK


def cmd_defuse(args) -> int:
    try:
        parts = defusion(args.bits, args.n)
    except ValueError as e:
        raise CliError(str(e))
    print(" ".join(parts))
    return EXIT_OK


def cmd_corpus(args) -> int:
    root = Path(args.root or os.environ.get("CIRQUENT_CORPUS", "corpus"))
    if not root.is_dir():
        raise CliError(f"no corpus directory at {root}")
    reports = hn.run_corpus(root, budget=args.budget)
    for r in reports:
        print(r.line())
    bad = sum(not r.ok for r in reports)
    print(f"{len(reports) - bad}/{len(reports)} cases pass")
    return EXIT_OK if bad == 0 else EXIT_FAIL


REPL_HELP = """\
commands:
  T <move>   append a machine move
  B <move>   append an environment move
  show       print the run, legal frontiers, and current winner
  undo       drop the last move
  help       this text
  quit       leave\
"""


def cmd_repl(args) -> int:
    f = fm.parse_formula(args.formula)
    lib = _interp_for(f, _read_library(args.atoms))
    arena = hn.FormulaArena(gm.of_formula(f, lib))
    run: list[gm.Labmove] = []

    def show() -> None:
        print(f"run: {gm.format_run(tuple(run)) or '(empty)'}")
        offender = arena.offender(tuple(run))
        if offender is not None:
            print(f"illegal, first offender {offender}")
        print(f"winner if play stops here: {arena.winner(tuple(run))}")
        for p in (TOP, BOT):
            print(f"{p} can play: {', '.join(arena.frontier(tuple(run), p)) or '(nothing)'}")

    print(f"game for {fm.format_formula(f)}; 'help' lists commands")
    show()
    stream = sys.stdin
    while True:
        print("> ", end="", flush=True)
        line = stream.readline()
        if not line:
            break
        words = line.strip().split(None, 1)
        if not words:
            continue
        cmd = words[0].lower()
        if cmd in ("quit", "exit", "q"):
            break
        elif cmd == "help":
            print(REPL_HELP)
        elif cmd == "undo":
            if run:
                run.pop()
            show()
        elif cmd == "show":
            show()
        elif cmd in ("t", "b") and len(words) == 2:
            run.append(gm.Labmove(TOP if cmd == "t" else BOT, words[1]))
            show()
        else:
            print(f"unknown command {words[0]!r}; 'help' lists commands")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cirquent",
        description="check, compile, and play cirquent proofs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify a proof file")
    p.add_argument("proof")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("compile", help="compile a proof into a strategy bundle")
    p.add_argument("proof")
    p.add_argument("-o", "--out", help="write the bundle here instead of stdout")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("play", help="play a compiled proof against an environment")
    p.add_argument("proof")
    p.add_argument("--atoms", required=True, help="game library file")
    p.add_argument("--seed", type=int, default=0, help="random environment seed")
    p.add_argument("--moves", help="comma separated scripted moves, empty = pass")
    p.add_argument("--spoiler", action="store_true", help="adversarial environment")
    p.add_argument("--budget", type=int, default=64)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("eval", help="evaluate a run over a formula or cirquent")
    p.add_argument("--formula")
    p.add_argument("--cirquent", help="cirquent literal or file")
    p.add_argument("--atoms", required=True)
    p.add_argument("--run", help='run literal, e.g. "T:1.q,B:0.a"')
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("fuse", help="fuse bitstrings into their interleavings")
    p.add_argument("bits", nargs="+")
    p.set_defaults(fn=cmd_fuse)

    p = sub.add_parser("defuse", help="split an interleaving back into components")
    p.add_argument("bits")
    p.add_argument("--n", type=int, required=True, help="number of components")
    p.set_defaults(fn=cmd_defuse)

    p = sub.add_parser("corpus", help="check and play every case in a corpus tree")
    p.add_argument("root", nargs="?",
                   help="defaults to $CIRQUENT_CORPUS, then ./corpus")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=cmd_corpus)

    p = sub.add_parser("repl", help="step through a formula game by hand")
    p.add_argument("--formula", required=True)
    p.add_argument("--atoms", required=True)
    p.set_defaults(fn=cmd_repl)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except hn.CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not our error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Cirquent proofs for branching recurrence, with games attached.

The pieces fit together in one pipeline: parse a formula, check a proof of
it, compile the proof into a strategy, and let that strategy play the
formula's game against an environment.
"""

from cirquent.cirquents import (
    Cirquent,
    CirquentError,
    club,
    format_cirquent,
    parse_cirquent,
)
from cirquent.formulas import (
    Formula,
    FormulaError,
    format_formula,
    negate,
    parse_formula,
)
from cirquent.fusion import defusion, fusions
from cirquent.games import (
    Labmove,
    Player,
    format_run,
    legal,
    parse_game_library,
    parse_run,
    winner,
)
from cirquent.rules import (
    Proof,
    Verdict,
    check_proof,
    conclusion_formula,
    format_proof,
    parse_proof,
)
from cirquent.strategies import CompiledStrategy, compile_proof

__all__ = [
    "Cirquent",
    "CirquentError",
    "CompiledStrategy",
    "Formula",
    "FormulaError",
    "Labmove",
    "Player",
    "Proof",
    "Verdict",
    "check_proof",
    "club",
    "compile_proof",
    "conclusion_formula",
    "defusion",
    "format_cirquent",
    "format_formula",
    "format_proof",
    "format_run",
    "fusions",
    "legal",
    "negate",
    "parse_cirquent",
    "parse_formula",
    "parse_game_library",
    "parse_proof",
    "parse_run",
    "winner",
]

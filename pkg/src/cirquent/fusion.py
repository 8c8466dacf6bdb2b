"""Round-robin interleaving of copy addresses.

The fusion of n bitstrings is the set of shortest bitstrings z such that for
every i, reading every n'th bit of z starting at position i spells out an
extension of the i'th input.  Positions falling beyond the end of their input
are unconstrained, which is where a fusion can have more than one element.
Defusion inverts the interleaving.
"""

from __future__ import annotations

from itertools import product


class FusionCapExceeded(RuntimeError):
    pass


def _check_bits(s: str, what: str) -> None:
    if s.strip("01"):
        raise ValueError(f"{what} must be a bitstring, got {s!r}")


def fusions(parts: list[str] | tuple[str, ...], cap: int = 4096) -> tuple[str, ...]:
    """All fusions of the given bitstrings, sorted; no inputs fuse to epsilon."""
    n = len(parts)
    if n == 0:
        return ("",)
    for p in parts:
        _check_bits(p, "fusion input")
    # minimal length covering the last forced position of every input
    length = max((n * (len(p) - 1) + i + 1 for i, p in enumerate(parts) if p), default=0)
    forced: list[str | None] = []
    for pos in range(length):
        i, j = pos % n, pos // n
        forced.append(parts[i][j] if j < len(parts[i]) else None)
    free = forced.count(None)
    if 2 ** free > cap:
        raise FusionCapExceeded(f"{free} free positions exceed cap {cap}")
    out = []
    for bits in product("01", repeat=free):
        it = iter(bits)
        out.append("".join(c if c is not None else next(it) for c in forced))
    return tuple(sorted(out))


def defusion(z: str, n: int) -> tuple[str, ...]:
    """Split z into its n round-robin subsequences."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    _check_bits(z, "defusion input")
    return tuple(z[i::n] for i in range(n))

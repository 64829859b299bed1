"""Circular hashed-environment fingerprints and Tanimoto similarity.

The hash is a fixed 64-bit mixing function over (radius, atom environment
invariant), reduced modulo the bit width, so fingerprints are identical
across runs and platforms.  Atom invariants are purely structural, which
makes fingerprints invariant under atom relabeling (canonical-equal
molecules produce identical bits).
"""

from __future__ import annotations

from dataclasses import dataclass

from molagent.elements import ATOMIC_NUMBER
from molagent.molgraph.model import Molecule

DEFAULT_RADIUS = 2
DEFAULT_NBITS = 2048

_MASK64 = (1 << 64) - 1


class WidthMismatch(ValueError):
    """Raised when combining fingerprints of different bit widths."""


def _mix(h: int, value: int) -> int:
    # splitmix64-style avalanche, seeded by folding values in sequence.
    h = (h + value + 0x9E3779B97F4A7C15) & _MASK64
    h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK64
    return h ^ (h >> 31)


def _hash_ints(values: tuple[int, ...]) -> int:
    h = 0x243F6A8885A308D3
    for v in values:
        h = _mix(h, v)
    return h


@dataclass(frozen=True)
class Fingerprint:
    bits: int
    nbits: int = DEFAULT_NBITS
    radius: int = DEFAULT_RADIUS

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def on_bits(self) -> list[int]:
        return [i for i in range(self.nbits) if self.bits >> i & 1]


def _initial_invariants(mol: Molecule) -> list[int]:
    invs = []
    for i, atom in enumerate(mol.atoms):
        invs.append(
            _hash_ints(
                (
                    ATOMIC_NUMBER[atom.element],
                    mol.degree(i),
                    atom.charge + 16,
                    atom.hydrogens,
                    int(atom.aromatic),
                    int(mol.in_ring(i)),
                )
            )
        )
    return invs


def fingerprint(
    mol: Molecule,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> Fingerprint:
    """Hash circular atom environments of radius 0..radius into a bitset."""
    if radius < 0 or nbits <= 0:
        raise ValueError("radius must be >= 0 and nbits positive")
    invs = _initial_invariants(mol)
    bits = 0
    for r in range(radius + 1):
        for inv in invs:
            bits |= 1 << (_hash_ints((r, inv)) % nbits)
        if r == radius:
            break
        nxt = []
        for i in range(len(mol.atoms)):
            env = sorted(
                _hash_ints((b.order, int(b.aromatic), invs[j]))
                for j, b in mol.neighbors(i)
            )
            nxt.append(_hash_ints(tuple([invs[i]] + env)))
        invs = nxt
    return Fingerprint(bits, nbits=nbits, radius=radius)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a AND b| / |a OR b|; defined as 1.0 when both fingerprints are empty."""
    if a.nbits != b.nbits:
        raise WidthMismatch(f"fingerprint widths differ: {a.nbits} vs {b.nbits}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union

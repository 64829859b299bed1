"""Canonical SMILES via iterative invariant refinement.

Atom ranks start from local invariants (element, degree, charge, hydrogen
count, aromaticity, ring membership, isotope) and are refined with sorted
neighbor invariants until stable.  Remaining ties are broken by promoting
one member of the first tied class (rank doubling); every member of the
class is explored and the lexicographically smallest emitted string wins,
which keeps the result independent of the input atom order even when a tied
class is not an automorphism orbit.
"""

from __future__ import annotations

from molagent.molgraph.model import Bond, Molecule
from molagent.molgraph.writer import emit_component

STRICT = "strict"
CONSTITUTION = "constitution-only"
MODES = (STRICT, CONSTITUTION)

# Stops runaway exploration on pathologically symmetric graphs; ordinary
# molecules finish in a handful of leaves.
MAX_LEAVES = 20000


def _bond_code(bond: Bond) -> tuple[int, bool]:
    return (bond.order, bond.aromatic)


def _initial_ranks(mol: Molecule) -> list[int]:
    keys = [
        (
            a.element,
            a.aromatic,
            a.charge,
            a.hydrogens,
            a.isotope or 0,
            mol.degree(i),
            mol.in_ring(i),
        )
        for i, a in enumerate(mol.atoms)
    ]
    return _densify(keys)


def _densify(keys: list) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(mol: Molecule, ranks: list[int]) -> list[int]:
    n_classes = len(set(ranks))
    while True:
        keys = [
            (
                ranks[i],
                tuple(sorted((_bond_code(b), ranks[j]) for j, b in mol.neighbors(i))),
            )
            for i in range(len(mol.atoms))
        ]
        ranks = _densify(keys)
        new_classes = len(set(ranks))
        if new_classes == n_classes:
            return ranks
        n_classes = new_classes


def _canonical_component(sub: Molecule, stereo: bool) -> str:
    n = len(sub.atoms)
    comp = list(range(n))
    best: str | None = None
    leaves = 0

    def explore(ranks: list[int]):
        nonlocal best, leaves
        ranks = _refine(sub, ranks)
        if len(set(ranks)) == n:
            s = emit_component(sub, comp, ranks, stereo=stereo)
            if best is None or s < best:
                best = s
            leaves += 1
            return
        by_rank: dict[int, list[int]] = {}
        for i, r in enumerate(ranks):
            by_rank.setdefault(r, []).append(i)
        tied = min(r for r, members in by_rank.items() if len(members) > 1)
        for member in by_rank[tied]:
            if leaves >= MAX_LEAVES:
                break
            promoted = [r * 2 for r in ranks]
            promoted[member] -= 1
            explore(promoted)

    explore(_initial_ranks(sub))
    assert best is not None
    return best


def subgraph(mol: Molecule, indices: list[int]) -> Molecule:
    """Induced subgraph with a monotone index remap (stereo-preserving)."""
    idx = sorted(indices)
    remap = {old: new for new, old in enumerate(idx)}
    atoms = tuple(mol.atoms[i] for i in idx)
    bonds = tuple(
        Bond(remap[b.a1], remap[b.a2], b.order, b.aromatic, b.stereo)
        for b in mol.bonds
        if b.a1 in remap and b.a2 in remap
    )
    return Molecule(atoms, bonds)


def canonical_smiles(mol: Molecule, mode: str = STRICT) -> str:
    """Canonical SMILES of a molecule; fragments are sorted in the output."""
    if mode not in MODES:
        raise ValueError(f"stereo mode must be one of {MODES}, got {mode!r}")
    comps: dict[int, list[int]] = {}
    for i, label in enumerate(mol.component_labels):
        comps.setdefault(label, []).append(i)
    parts = [
        _canonical_component(subgraph(mol, comp), stereo=(mode == STRICT))
        for comp in comps.values()
    ]
    return ".".join(sorted(parts))

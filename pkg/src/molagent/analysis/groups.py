"""Functional-group detection by subgraph pattern matching.

Patterns are small query graphs shipped as a data file so the library can be
extended without code changes.  Matching is VF2-style backtracking with
degree pruning; every reported match can be re-verified with
``verify_match`` (the matcher is self-checking in the test suite).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from molagent.molgraph.model import Bond, Molecule


@dataclass(frozen=True)
class AtomConstraint:
    element: str | None = None
    aromatic: bool | None = None
    charge: int | None = None
    degree: int | None = None
    hydrogens: int | None = None

    def matches(self, mol: Molecule, idx: int) -> bool:
        atom = mol.atoms[idx]
        if self.element is not None and atom.element != self.element:
            return False
        if self.aromatic is not None and atom.aromatic != self.aromatic:
            return False
        if self.charge is not None and atom.charge != self.charge:
            return False
        if self.degree is not None and mol.degree(idx) != self.degree:
            return False
        if self.hydrogens is not None and atom.hydrogens != self.hydrogens:
            return False
        return True


@dataclass(frozen=True)
class GroupPattern:
    name: str
    atoms: tuple[AtomConstraint, ...]
    bonds: tuple[tuple[int, int, object], ...]  # order: 1|2|3|'aromatic'|'any'

    def __post_init__(self):
        reached = {0}
        changed = True
        while changed:
            changed = False
            for i, j, _ in self.bonds:
                if (i in reached) != (j in reached):
                    reached.update((i, j))
                    changed = True
        if reached != set(range(len(self.atoms))):
            raise ValueError(f"pattern {self.name!r} is not connected")


def _bond_matches(bond: Bond, spec) -> bool:
    if spec == "any":
        return True
    if spec == "aromatic":
        return bond.aromatic
    return bond.order == spec and not bond.aromatic


def load_patterns() -> tuple[GroupPattern, ...]:
    raw = json.loads(
        resources.files("molagent.data").joinpath("functional_groups.json").read_text()
    )
    patterns = []
    names = set()
    for entry in raw["patterns"]:
        if entry["name"] in names:
            raise ValueError(f"duplicate pattern name {entry['name']!r}")
        names.add(entry["name"])
        patterns.append(
            GroupPattern(
                entry["name"],
                tuple(AtomConstraint(**a) for a in entry["atoms"]),
                tuple((b[0], b[1], b[2]) for b in entry["bonds"]),
            )
        )
    return tuple(patterns)


_PATTERNS: tuple[GroupPattern, ...] | None = None


def default_patterns() -> tuple[GroupPattern, ...]:
    global _PATTERNS
    if _PATTERNS is None:
        _PATTERNS = load_patterns()
    return _PATTERNS


def _prefix_sets(order: list[int]):
    placed: set[int] = set()
    for i in order:
        yield set(placed), i
        placed.add(i)


def find_pattern(mol: Molecule, pattern: GroupPattern) -> list[frozenset[int]]:
    """All embeddings of the pattern, as deduplicated atom-index sets."""
    n_pat = len(pattern.atoms)
    plan = []
    for placed, i in _prefix_sets(_order(pattern)):
        anchors = [(j, spec) for j, spec in _pattern_adj(pattern)[i] if j in placed]
        plan.append((i, anchors))

    found: set[frozenset[int]] = set()
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(step: int):
        if step == n_pat:
            found.add(frozenset(mapping.values()))
            return
        p_atom, anchors = plan[step]
        constraint = pattern.atoms[p_atom]
        if anchors:
            first_anchor, _ = anchors[0]
            candidates = [w for w, _ in mol.neighbors(mapping[first_anchor])]
        else:
            candidates = range(len(mol.atoms))
        for cand in sorted(candidates):
            if cand in used or not constraint.matches(mol, cand):
                continue
            ok = True
            for j, spec in anchors:
                bond = mol.bond_between(cand, mapping[j])
                if bond is None or not _bond_matches(bond, spec):
                    ok = False
                    break
            if not ok:
                continue
            mapping[p_atom] = cand
            used.add(cand)
            extend(step + 1)
            del mapping[p_atom]
            used.discard(cand)

    extend(0)
    return sorted(found, key=lambda s: tuple(sorted(s)))


def _pattern_adj(pattern: GroupPattern) -> dict[int, list[tuple[int, object]]]:
    adj: dict[int, list[tuple[int, object]]] = {i: [] for i in range(len(pattern.atoms))}
    for i, j, spec in pattern.bonds:
        adj[i].append((j, spec))
        adj[j].append((i, spec))
    return adj


def _order(pattern: GroupPattern) -> list[int]:
    adj = _pattern_adj(pattern)
    order = [0]
    placed = {0}
    while len(order) < len(pattern.atoms):
        for i in range(len(pattern.atoms)):
            if i not in placed and any(j in placed for j, _ in adj[i]):
                order.append(i)
                placed.add(i)
                break
    return order


def find_functional_groups(
    mol: Molecule,
    patterns: tuple[GroupPattern, ...] | None = None,
) -> list[tuple[str, frozenset[int]]]:
    """Matches of every library pattern, ordered by name then atom indices."""
    patterns = default_patterns() if patterns is None else patterns
    results: list[tuple[str, frozenset[int]]] = []
    for pattern in sorted(patterns, key=lambda p: p.name):
        for atoms in find_pattern(mol, pattern):
            results.append((pattern.name, atoms))
    return results


def verify_match(mol: Molecule, pattern: GroupPattern, atoms: frozenset[int]) -> bool:
    """Independent re-check that some assignment of `atoms` satisfies the pattern."""
    from itertools import permutations

    atom_list = sorted(atoms)
    if len(atom_list) != len(pattern.atoms):
        return False
    for perm in permutations(atom_list):
        if all(c.matches(mol, perm[i]) for i, c in enumerate(pattern.atoms)):
            if all(
                (b := mol.bond_between(perm[i], perm[j])) is not None
                and _bond_matches(b, spec)
                for i, j, spec in pattern.bonds
            ):
                return True
    return False

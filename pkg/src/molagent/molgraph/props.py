"""Scalar molecule properties and SMILES-level operations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from molagent.elements import atomic_weight
from molagent.molgraph.canon import CONSTITUTION, MODES, STRICT, canonical_smiles
from molagent.molgraph.model import Molecule, SmilesParseError
from molagent.molgraph.parser import parse_smiles


@dataclass(frozen=True)
class CanonicalSmiles:
    text: str
    stereo_mode: str


def canonicalize(text: str, mode: str = STRICT) -> CanonicalSmiles:
    """Map any spelling of a molecule to its single canonical spelling."""
    return CanonicalSmiles(canonical_smiles(parse_smiles(text), mode), mode)


def atom_counts(mol: Molecule) -> dict[str, int]:
    """Element -> atom count, including attached hydrogens."""
    counts: Counter[str] = Counter()
    for atom in mol.atoms:
        counts[atom.element] += 1
        if atom.hydrogens:
            counts["H"] += atom.hydrogens
    return dict(counts)


def molecular_weight(mol: Molecule) -> float:
    """Sum of standard atomic weights; isotopes use their mass number."""
    total = 0.0
    for atom in mol.atoms:
        total += float(atom.isotope) if atom.isotope is not None else atomic_weight(atom.element)
        total += atom.hydrogens * atomic_weight("H")
    return total


def _hill_formula(counts: dict[str, int]) -> str:
    def fmt(sym: str) -> str:
        n = counts[sym]
        return sym if n == 1 else f"{sym}{n}"

    symbols = set(counts)
    parts: list[str] = []
    if "C" in symbols:
        parts.append(fmt("C"))
        symbols.discard("C")
        if "H" in symbols:
            parts.append(fmt("H"))
            symbols.discard("H")
    parts.extend(fmt(s) for s in sorted(symbols))
    return "".join(parts)


def molecular_formula(mol: Molecule) -> str:
    """Hill-order formula; disconnected fragments are dot-joined."""
    comps: dict[int, list[int]] = {}
    for i, label in enumerate(mol.component_labels):
        comps.setdefault(label, []).append(i)
    parts = []
    for label in sorted(comps):
        counts: Counter[str] = Counter()
        for i in comps[label]:
            atom = mol.atoms[i]
            counts[atom.element] += 1
            if atom.hydrogens:
                counts["H"] += atom.hydrogens
        parts.append(_hill_formula(dict(counts)))
    return ".".join(parts)


def compare_smiles(a: str, b: str, mode: str = STRICT) -> bool:
    """True iff both inputs canonicalize to the same string."""
    if mode not in MODES:
        raise ValueError(f"stereo mode must be one of {MODES}, got {mode!r}")
    try:
        mol_a = parse_smiles(a)
    except SmilesParseError as exc:
        raise type(exc)(f"first input: {exc.message}", exc.offset) from None
    try:
        mol_b = parse_smiles(b)
    except SmilesParseError as exc:
        raise type(exc)(f"second input: {exc.message}", exc.offset) from None
    return canonical_smiles(mol_a, mode) == canonical_smiles(mol_b, mode)

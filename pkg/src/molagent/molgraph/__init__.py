"""SMILES grammar, molecular graph model, canonicalization, and properties."""

from molagent.molgraph.canon import CONSTITUTION, MODES, STRICT, canonical_smiles, subgraph
from molagent.molgraph.model import (
    Atom,
    Bond,
    CIS,
    TRANS,
    InvalidCharge,
    Molecule,
    MoleculeError,
    SmilesParseError,
    UnbalancedParenthesis,
    UnclosedRing,
    UnknownElement,
    ValenceViolation,
)
from molagent.molgraph.parser import parse_smiles
from molagent.molgraph.props import (
    CanonicalSmiles,
    atom_counts,
    canonicalize,
    compare_smiles,
    molecular_formula,
    molecular_weight,
)
from molagent.molgraph.writer import write_smiles

__all__ = [
    "Atom",
    "Bond",
    "CanonicalSmiles",
    "CIS",
    "CONSTITUTION",
    "InvalidCharge",
    "MODES",
    "Molecule",
    "MoleculeError",
    "STRICT",
    "SmilesParseError",
    "TRANS",
    "UnbalancedParenthesis",
    "UnclosedRing",
    "UnknownElement",
    "ValenceViolation",
    "atom_counts",
    "canonical_smiles",
    "canonicalize",
    "compare_smiles",
    "molecular_formula",
    "molecular_weight",
    "parse_smiles",
    "subgraph",
    "write_smiles",
]

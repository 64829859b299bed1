"""SELFIES-style robust molecular strings: derivation-rule decoder and encoder.

The dialect implemented here follows the derivation-rule core of SELFIES:
every token stream over the supported alphabet decodes to a valid molecule
because bond orders are capped by the remaining valence of both partners.

Alphabet
--------
* Atom tokens ``[C]``, ``[=C]``, ``[#C]`` for the organic subset
  (B, C, N, O, P, S, F, Cl, Br, I); ``[N+1]``-style tokens carry a +-1 charge
  for B, C, N, O, P, S.  A leading ``=``/``#`` requests a double/triple bond
  to the previous atom, capped by both valences.
* ``[Branch1]``/``[Branch2]`` (and ``=``/``#`` variants) read 1/2 index
  symbols giving Q; the next Q+1 symbols derive a branch off the current
  atom.  A branch symbol arriving with fewer than 2 spare valences is
  dropped together with its index symbols.
* ``[Ring1]``/``[Ring2]`` (and ``=``/``#`` variants) read 1/2 index symbols
  giving Q and bond the current atom to the atom derived Q+1 positions
  earlier, capped by both remaining valences.
* Index symbols map to 0..15 in this order: ``[C] [Ring1] [Ring2] [Branch1]
  [=Branch1] [#Branch1] [Branch2] [=Branch2] [#Branch2] [O] [N] [=N] [=C]
  [#C] [S] [P]``; any other alphabet token counts as 0.  Multi-symbol
  indices are big-endian base 16.

Out of encoder scope (raises OutOfScopeFeature): aromatic atoms or bonds,
isotopes, disconnected fragments, charges beyond +-1, and hydrogen counts
that deviate from the standard valence fill.  Stereo markers are dropped:
round trips preserve constitution, not configuration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from molagent.elements import ORGANIC_SUBSET
from molagent.molgraph.model import Atom, Bond, Molecule, smallest_valence
from molagent.molgraph.parser import parse_smiles
from molagent.molgraph.writer import write_smiles


class SelfiesError(ValueError):
    """Base class for SELFIES conversion failures."""


class UnknownToken(SelfiesError):
    def __init__(self, token: str, index: int):
        super().__init__(f"unknown token {token} at position {index}")
        self.token = token
        self.index = index


class EmptyDerivation(SelfiesError):
    """Raised when a token stream derives no atoms."""


class OutOfScopeFeature(SelfiesError):
    """Raised by the encoder for constructs the alphabet cannot express."""


NEUTRAL_CAPACITY: dict[str, int] = {el: vals[-1] for el, vals in ORGANIC_SUBSET.items()}

CHARGED_CAPACITY: dict[tuple[str, int], int] = {
    ("B", 1): 2, ("B", -1): 4,
    ("C", 1): 3, ("C", -1): 3,
    ("N", 1): 4, ("N", -1): 2,
    ("O", 1): 3, ("O", -1): 1,
    ("P", 1): 4, ("P", -1): 2,
    ("S", 1): 3, ("S", -1): 1,
}

INDEX_TOKENS: list[str] = [
    "[C]", "[Ring1]", "[Ring2]",
    "[Branch1]", "[=Branch1]", "[#Branch1]",
    "[Branch2]", "[=Branch2]", "[#Branch2]",
    "[O]", "[N]", "[=N]", "[=C]", "[#C]", "[S]", "[P]",
]
_INDEX_VALUE = {tok: i for i, tok in enumerate(INDEX_TOKENS)}

_ATOM_RE = re.compile(r"\[(=|#)?([A-Z][a-z]?)(?:([+-])1)?\]")
_GROUP_RE = re.compile(r"\[(=|#)?(Branch|Ring)([12])\]")
_TOKEN_RE = re.compile(r"\[[^\[\]]*\]")
_PREFIX_ORDER = {None: 1, "=": 2, "#": 3}


@dataclass(frozen=True)
class SelfiesString:
    symbols: tuple[str, ...]

    @property
    def text(self) -> str:
        return "".join(self.symbols)

    @classmethod
    def from_text(cls, text: str) -> "SelfiesString":
        symbols = _TOKEN_RE.findall(text)
        if "".join(symbols) != text:
            raise SelfiesError(f"text is not a sequence of bracketed tokens: {text!r}")
        return cls(tuple(symbols))

    def __str__(self) -> str:
        return self.text


def _classify(token: str, index: int):
    """Return ('atom', order, element, charge) or ('branch'|'ring', order, L)."""
    m = _GROUP_RE.fullmatch(token)
    if m:
        return (m.group(2).lower(), _PREFIX_ORDER[m.group(1)], int(m.group(3)))
    m = _ATOM_RE.fullmatch(token)
    if m:
        element = m.group(2)
        charge = 0 if m.group(3) is None else (1 if m.group(3) == "+" else -1)
        if charge == 0 and element in NEUTRAL_CAPACITY:
            return ("atom", _PREFIX_ORDER[m.group(1)], element, 0)
        if charge != 0 and (element, charge) in CHARGED_CAPACITY:
            return ("atom", _PREFIX_ORDER[m.group(1)], element, charge)
    raise UnknownToken(token, index)


def _capacity(element: str, charge: int) -> int:
    return NEUTRAL_CAPACITY[element] if charge == 0 else CHARGED_CAPACITY[(element, charge)]


class _Decoder:
    def __init__(self, tokens: tuple[str, ...]):
        self.tokens = tokens
        self.kinds = [_classify(t, i) for i, t in enumerate(tokens)]
        self.elements: list[str] = []
        self.charges: list[int] = []
        self.used: list[int] = []
        self.bonds: list[tuple[int, int, int]] = []

    def remaining(self, idx: int) -> int:
        return _capacity(self.elements[idx], self.charges[idx]) - self.used[idx]

    def add_atom(self, element: str, charge: int) -> int:
        self.elements.append(element)
        self.charges.append(charge)
        self.used.append(0)
        return len(self.elements) - 1

    def read_index(self, start: int, count: int, end: int) -> tuple[int, int]:
        value = 0
        i = start
        for _ in range(count):
            if i < end:
                value = value * 16 + _INDEX_VALUE.get(self.tokens[i], 0)
                i += 1
            else:
                value *= 16
        return value, i

    def derive(self, start: int, end: int, current: int | None, first_cap: int | None = None) -> int:
        """Derive tokens[start:end] attached at `current`; returns the order
        of the first bond formed (0 if none).

        `first_cap` limits the first bond out of `current` (used for branch
        contents).  All other capacity checks consult the recorded bond sums,
        so rings targeting an atom from inside a branch stay consistent.
        """
        first_order = 0
        i = start

        def avail() -> int:
            a = self.remaining(current)
            if first_order == 0 and first_cap is not None:
                a = min(a, first_cap)
            return a

        while i < end:
            kind = self.kinds[i]
            if kind[0] == "atom":
                _, order, element, charge = kind
                if current is None:
                    current = self.add_atom(element, charge)
                    i += 1
                    continue
                a = avail()
                if a == 0:
                    return first_order  # saturated: the rest is ignored
                order = min(order, a, _capacity(element, charge))
                new = self.add_atom(element, charge)
                self.bonds.append((current, new, order))
                self.used[current] += order
                self.used[new] += order
                if first_order == 0:
                    first_order = order
                current = new
                i += 1
            elif kind[0] == "branch":
                _, order, length = kind
                q, i = self.read_index(i + 1, length, end)
                content_end = min(i + q + 1, end)
                if current is None or avail() <= 1:
                    # Index symbols consumed; content re-enters the main stream.
                    continue
                made = self.derive(i, content_end, current, min(order, avail() - 1))
                if first_order == 0 and made:
                    first_order = made
                i = content_end
            else:  # ring
                _, order, length = kind
                q, i = self.read_index(i + 1, length, end)
                if current is None or avail() == 0:
                    continue
                target = max(0, len(self.elements) - 1 - (q + 1))
                if target == current:
                    continue
                if any({a, b} == {current, target} for a, b, _ in self.bonds):
                    continue
                order = min(order, avail(), self.remaining(target))
                if order < 1:
                    continue
                self.bonds.append((target, current, order))
                self.used[current] += order
                self.used[target] += order
                if first_order == 0:
                    first_order = order
        return first_order

    def molecule(self) -> Molecule:
        if not self.elements:
            raise EmptyDerivation("token stream derived no atoms")
        atoms = []
        for element, charge, used in zip(self.elements, self.charges, self.used):
            if charge == 0:
                hydrogens = smallest_valence(element, used) - used
            else:
                hydrogens = _capacity(element, charge) - used
            atoms.append(Atom(element, charge=charge, hydrogens=hydrogens))
        return Molecule(tuple(atoms), tuple(Bond(a, b, o) for a, b, o in self.bonds))


def selfies_to_molecule(selfies: SelfiesString | str) -> Molecule:
    s = selfies if isinstance(selfies, SelfiesString) else SelfiesString.from_text(selfies)
    if not s.symbols:
        raise EmptyDerivation("empty SELFIES input")
    decoder = _Decoder(s.symbols)
    decoder.derive(0, len(s.symbols), None)
    return decoder.molecule()


def selfies_to_smiles(selfies: SelfiesString | str) -> str:
    """Decode a token stream; always yields a valid SMILES for valid tokens."""
    return write_smiles(selfies_to_molecule(selfies))


def _index_symbols(q: int, limit_name: str) -> list[str]:
    if q < 16:
        return [INDEX_TOKENS[q]]
    if q < 256:
        return [INDEX_TOKENS[q // 16], INDEX_TOKENS[q % 16]]
    raise OutOfScopeFeature(f"{limit_name} needs an index beyond 255")


def _group_token(kind: str, order: int, length: int) -> str:
    prefix = {1: "", 2: "=", 3: "#"}[order]
    return f"[{prefix}{kind}{length}]"


def molecule_to_selfies(mol: Molecule) -> SelfiesString:
    if mol.num_components > 1:
        raise OutOfScopeFeature("disconnected fragments")
    for atom in mol.atoms:
        if atom.aromatic:
            raise OutOfScopeFeature("aromatic atoms (no kekulization pass)")
        if atom.isotope is not None:
            raise OutOfScopeFeature("isotope labels")
        if atom.charge == 0:
            if atom.element not in NEUTRAL_CAPACITY:
                raise OutOfScopeFeature(f"element {atom.element} outside the organic subset")
        elif (atom.element, atom.charge) not in CHARGED_CAPACITY:
            raise OutOfScopeFeature(f"charge {atom.charge:+d} on {atom.element}")
    for bond in mol.bonds:
        if bond.aromatic:
            raise OutOfScopeFeature("aromatic bonds (no kekulization pass)")

    bond_sum = [0] * len(mol.atoms)
    for b in mol.bonds:
        bond_sum[b.a1] += b.order
        bond_sum[b.a2] += b.order
    for i, atom in enumerate(mol.atoms):
        if atom.charge == 0:
            fill = smallest_valence(atom.element, bond_sum[i])
            if fill is None or atom.hydrogens != fill - bond_sum[i]:
                raise OutOfScopeFeature(
                    f"hydrogen count on atom {i} deviates from the valence fill")
        else:
            cap = _capacity(atom.element, atom.charge)
            if bond_sum[i] > cap or atom.hydrogens != cap - bond_sum[i]:
                raise OutOfScopeFeature(
                    f"hydrogen count on charged atom {i} deviates from its capacity")

    pos: dict[int, int] = {}
    counter = [0]
    used_bonds: set[tuple[int, int]] = set()

    def atom_token(idx: int, order: int, root: bool) -> str:
        atom = mol.atoms[idx]
        prefix = "" if root else {1: "", 2: "=", 3: "#"}[order]
        charge = "" if atom.charge == 0 else ("+1" if atom.charge > 0 else "-1")
        return f"[{prefix}{atom.element}{charge}]"

    def subtree(v: int, parent: int | None, in_order: int) -> list[str]:
        pos[v] = counter[0]
        counter[0] += 1
        syms = [atom_token(v, in_order, parent is None)]
        # Ring closures are always emitted at the later-visited endpoint, so
        # the index counts strictly backwards in derivation order.
        for w, b in sorted(mol.neighbors(v), key=lambda nb: nb[0]):
            if b.key() in used_bonds or w not in pos:
                continue
            used_bonds.add(b.key())
            idx_syms = _index_symbols(pos[v] - pos[w] - 1, "ring closure")
            syms.append(_group_token("Ring", b.order, len(idx_syms)))
            syms.extend(idx_syms)
        # Children are re-evaluated after each subtree: an edge to a sibling
        # may have closed as a ring inside the previous branch.
        while True:
            candidates = [
                (w, b)
                for w, b in sorted(mol.neighbors(v), key=lambda nb: nb[0])
                if b.key() not in used_bonds and w not in pos
            ]
            if not candidates:
                break
            w, b = candidates[0]
            used_bonds.add(b.key())
            content = subtree(w, v, b.order)
            if len(candidates) > 1:
                idx_syms = _index_symbols(len(content) - 1, "branch")
                syms.append(_group_token("Branch", b.order, len(idx_syms)))
                syms.extend(idx_syms)
            syms.extend(content)
        return syms

    return SelfiesString(tuple(subtree(0, None, 1)))


def smiles_to_selfies(smiles: str) -> SelfiesString:
    """Encode a SMILES string; stereo markers are dropped (constitution only)."""
    return molecule_to_selfies(parse_smiles(smiles))

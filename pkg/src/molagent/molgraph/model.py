"""Molecular graph model: atoms, bonds, and immutable molecules.

Conventions used throughout:

* ``Atom.hydrogens`` is the total hydrogen count attached to the atom
  (explicit bracket H for bracket atoms, derived from standard valences for
  organic-subset atoms).
* ``Atom.parity`` is a tetrahedral parity bit normalized to the atom's
  neighbor list sorted by atom index, with an attached hydrogen acting as a
  sentinel neighbor that sorts first.  0 corresponds to ``@`` for that
  reference order, 1 to ``@@``.
* ``Bond.stereo`` is a cis/trans descriptor for double bonds, normalized to
  the lowest-index substituent on each end.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from molagent.elements import ORGANIC_SUBSET, SYMBOLS

H_SENTINEL = -1

CIS = "cis"
TRANS = "trans"


class MoleculeError(ValueError):
    """Raised when a molecular graph violates a structural invariant."""


class SmilesParseError(ValueError):
    """Base class for SMILES parse failures; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


class UnclosedRing(SmilesParseError):
    pass


class UnbalancedParenthesis(SmilesParseError):
    pass


class UnknownElement(SmilesParseError):
    pass


class InvalidCharge(SmilesParseError):
    pass


class ValenceViolation(SmilesParseError):
    pass


@dataclass(frozen=True)
class Atom:
    element: str
    isotope: int | None = None
    charge: int = 0
    explicit_h: int | None = None
    aromatic: bool = False
    hydrogens: int = 0
    parity: int | None = None

    def __post_init__(self):
        if self.element not in SYMBOLS:
            raise MoleculeError(f"unknown element symbol {self.element!r}")
        if not -8 <= self.charge <= 8:
            raise MoleculeError(f"charge {self.charge} outside [-8, +8]")
        if self.explicit_h is not None and self.explicit_h < 0:
            raise MoleculeError("explicit hydrogen count must be >= 0")
        if self.hydrogens < 0:
            raise MoleculeError("hydrogen count must be >= 0")


@dataclass(frozen=True)
class Bond:
    a1: int
    a2: int
    order: int = 1
    aromatic: bool = False
    stereo: str | None = None

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise MoleculeError(f"bond order must be 1, 2 or 3, got {self.order}")
        if self.stereo is not None and self.stereo not in (CIS, TRANS):
            raise MoleculeError(f"bad stereo descriptor {self.stereo!r}")

    def other(self, idx: int) -> int:
        return self.a2 if idx == self.a1 else self.a1

    def key(self) -> tuple[int, int]:
        return (self.a1, self.a2) if self.a1 < self.a2 else (self.a2, self.a1)


def smallest_valence(element: str, bond_sum: int) -> int | None:
    """Smallest standard valence >= bond_sum, or None if none fits."""
    for v in ORGANIC_SUBSET.get(element, ()):
        if v >= bond_sum:
            return v
    return None


@dataclass(frozen=True)
class Molecule:
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...] = ()

    def __post_init__(self):
        n = len(self.atoms)
        if n == 0:
            raise MoleculeError("a molecule needs at least one atom")
        seen: set[tuple[int, int]] = set()
        for b in self.bonds:
            if not (0 <= b.a1 < n and 0 <= b.a2 < n):
                raise MoleculeError(f"bond endpoint out of range: {b}")
            if b.a1 == b.a2:
                raise MoleculeError(f"self-bond on atom {b.a1}")
            if b.key() in seen:
                raise MoleculeError(f"duplicate bond {b.key()}")
            seen.add(b.key())

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, Bond], ...], ...]:
        adj: list[list[tuple[int, Bond]]] = [[] for _ in self.atoms]
        for b in self.bonds:
            adj[b.a1].append((b.a2, b))
            adj[b.a2].append((b.a1, b))
        return tuple(tuple(x) for x in adj)

    def neighbors(self, idx: int) -> tuple[tuple[int, Bond], ...]:
        return self.adjacency[idx]

    def bond_between(self, i: int, j: int) -> Bond | None:
        for k, b in self.adjacency[i]:
            if k == j:
                return b
        return None

    @cached_property
    def component_labels(self) -> tuple[int, ...]:
        labels = [-1] * len(self.atoms)
        comp = 0
        for start in range(len(self.atoms)):
            if labels[start] != -1:
                continue
            stack = [start]
            labels[start] = comp
            while stack:
                v = stack.pop()
                for w, _ in self.adjacency[v]:
                    if labels[w] == -1:
                        labels[w] = comp
                        stack.append(w)
            comp += 1
        return tuple(labels)

    @property
    def num_components(self) -> int:
        return max(self.component_labels) + 1

    @cached_property
    def ring_bonds(self) -> frozenset[tuple[int, int]]:
        """Keys of bonds that lie on a cycle (non-bridge edges)."""
        n = len(self.atoms)
        disc = [-1] * n
        low = [0] * n
        bridges: set[tuple[int, int]] = set()
        timer = 0
        for root in range(n):
            if disc[root] != -1:
                continue
            stack: list[tuple[int, int, int]] = [(root, -1, 0)]
            while stack:
                v, parent_edge, state = stack.pop()
                if state == 0:
                    if disc[v] != -1:
                        continue
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, parent_edge, 1))
                    for w, b in self.adjacency[v]:
                        if id(b) == parent_edge:
                            continue
                        if disc[w] == -1:
                            stack.append((w, id(b), 0))
                        else:
                            low[v] = min(low[v], disc[w])
                else:
                    for w, b in self.adjacency[v]:
                        if id(b) == parent_edge:
                            continue
                        if disc[w] > disc[v]:  # tree child
                            low[v] = min(low[v], low[w])
                            if low[w] > disc[v]:
                                bridges.add(b.key())
        return frozenset(b.key() for b in self.bonds if b.key() not in bridges)

    def in_ring(self, idx: int) -> bool:
        for _, b in self.adjacency[idx]:
            if b.key() in self.ring_bonds:
                return True
        return False

    def degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def permute(self, perm: list[int] | tuple[int, ...]) -> "Molecule":
        """Relabel atoms so old index i becomes perm[i]; stereo is preserved."""
        n = len(self.atoms)
        if sorted(perm) != list(range(n)):
            raise MoleculeError("perm must be a permutation of atom indices")
        new_atoms: list[Atom | None] = [None] * n
        for old, atom in enumerate(self.atoms):
            if atom.parity is not None:
                old_ref = sorted(self._parity_entries(old))
                mapped = [e if e == H_SENTINEL else perm[e] for e in old_ref]
                flip = sequence_parity(sorted(mapped), mapped)
                atom = replace(atom, parity=atom.parity ^ flip)
            new_atoms[perm[old]] = atom
        new_bonds = []
        for b in self.bonds:
            stereo = b.stereo
            if stereo is not None:
                flips = 0
                for end, other in ((b.a1, b.a2), (b.a2, b.a1)):
                    subs = [w for w, _ in self.adjacency[end] if w != other]
                    if len(subs) > 1 and min(subs) != min(subs, key=lambda w: perm[w]):
                        flips ^= 1
                if flips:
                    stereo = CIS if stereo == TRANS else TRANS
            new_bonds.append(Bond(perm[b.a1], perm[b.a2], b.order, b.aromatic, stereo))
        return Molecule(tuple(new_atoms), tuple(new_bonds))  # type: ignore[arg-type]

    def _parity_entries(self, idx: int) -> list[int]:
        """Neighbor entries over which parity is defined (H sentinel included)."""
        entries = [w for w, _ in self.adjacency[idx]]
        if self.atoms[idx].hydrogens == 1 and len(entries) == 3:
            entries.append(H_SENTINEL)
        return entries

    @classmethod
    def from_graph(
        cls,
        elements: list[str],
        bonds: list[tuple[int, int, int]],
        charges: list[int] | None = None,
    ) -> "Molecule":
        """Build a molecule from bare graph data, deriving hydrogen counts.

        Elements must be in the organic subset; raises MoleculeError when the
        bond-order sum exceeds every standard valence.
        """
        n = len(elements)
        sums = [0] * n
        for i, j, order in bonds:
            sums[i] += order
            sums[j] += order
        atoms = []
        for i, el in enumerate(elements):
            charge = charges[i] if charges else 0
            valence = smallest_valence(el, sums[i])
            if valence is None:
                raise MoleculeError(
                    f"bond-order sum {sums[i]} exceeds valences of {el}")
            atoms.append(Atom(el, charge=charge, hydrogens=valence - sums[i]))
        return cls(tuple(atoms), tuple(Bond(i, j, order) for i, j, order in bonds))


def permutation_parity(perm: list[int]) -> int:
    """0 if perm is even, 1 if odd."""
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def sequence_parity(reference: list, order: list) -> int:
    """Parity of the permutation taking ``reference`` to ``order``."""
    pos = {v: i for i, v in enumerate(reference)}
    return permutation_parity([pos[v] for v in order])

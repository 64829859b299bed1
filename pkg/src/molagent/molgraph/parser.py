"""SMILES parser for the organic-subset grammar.

Supported: aliphatic/aromatic organic-subset atoms, bracket atoms with
isotope, ``@``/``@@`` parity, H counts and charges, ring closures ``0``-``9``
and ``%nn``, branches, dots, explicit bond symbols and ``/`` ``\\``
directional markers.  Aromaticity is accepted as written (lowercase atoms);
no perception or kekulization is attempted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from molagent.elements import AROMATIC_SYMBOLS, ORGANIC_SUBSET, SYMBOLS
from molagent.molgraph.model import (
    CIS,
    TRANS,
    Atom,
    Bond,
    H_SENTINEL,
    InvalidCharge,
    Molecule,
    SmilesParseError,
    UnbalancedParenthesis,
    UnclosedRing,
    UnknownElement,
    ValenceViolation,
    sequence_parity,
    smallest_valence,
)

_BOND_ORDERS = {"-": 1, "=": 2, "#": 3}

_BRACKET_RE = re.compile(
    r"(?P<isotope>\d+)?"
    r"(?P<symbol>[A-Z][a-z]?|[a-z])"
    r"(?P<parity>@@|@)?"
    r"(?P<hcount>H\d*)?"
    r"(?P<charge>\+\d+|-\d+|\++|-+)?"
)


@dataclass
class _PendingBond:
    order: int | None = None  # None = default (single, or aromatic between aromatics)
    aromatic: bool = False
    direction: int = 0  # +1 for '/', -1 for '\\', relative to written from->to
    offset: int = 0


@dataclass
class _RingOpen:
    atom: int
    pending: _PendingBond
    offset: int


@dataclass
class _AtomState:
    element: str
    offset: int
    isotope: int | None = None
    charge: int = 0
    explicit_h: int | None = None
    aromatic: bool = False
    parity_token: str | None = None
    from_bracket: bool = False
    # Neighbor entries in written order; ring openings hold a _RingOpen
    # placeholder until the matching digit closes.
    order_entries: list = field(default_factory=list)


@dataclass
class _BondState:
    a1: int
    a2: int
    order: int
    aromatic: bool
    # (from_atom, sign) of a directional marker, if any.
    direction: tuple[int, int] | None = None


def parse_smiles(text: str) -> Molecule:
    """Parse a SMILES string into a Molecule.

    Raises a SmilesParseError subclass naming the byte offset on malformed
    input; a returned Molecule always has fully resolved ring closures and
    hydrogen counts.
    """
    if not isinstance(text, str) or not text:
        raise SmilesParseError("empty SMILES input", 0)

    atoms: list[_AtomState] = []
    bonds: list[_BondState] = []
    rings: dict[int, _RingOpen] = {}
    branch_stack: list[tuple[int, int]] = []  # (atom index, '(' offset)
    prev: int | None = None
    pending: _PendingBond | None = None

    def add_bond(a1: int, a2: int, pend: _PendingBond | None, other_pend: _PendingBond | None = None):
        spec = pend if pend is not None and (pend.order is not None or pend.direction) else None
        spec2 = other_pend if other_pend is not None and (other_pend.order is not None or other_pend.direction) else None
        order = None
        aromatic = False
        for s in (spec, spec2):
            if s is not None and s.order is not None:
                if order is not None and (order, aromatic) != (s.order, s.aromatic):
                    raise SmilesParseError("conflicting bond orders on ring closure", s.offset)
                order, aromatic = s.order, s.aromatic
        if order is None:
            if atoms[a1].aromatic and atoms[a2].aromatic:
                order, aromatic = 1, True
            else:
                order, aromatic = 1, False
        direction = None
        # Ring-closure direction: the open-side token reads a1->a2, the
        # close-side token reads a2->a1.
        if spec is not None and spec.direction:
            direction = (a1, spec.direction)
        if spec2 is not None and spec2.direction:
            direction = (a2, spec2.direction)
        for b in bonds:
            if {b.a1, b.a2} == {a1, a2}:
                raise SmilesParseError("duplicate bond between atoms", pend.offset if pend else 0)
        bonds.append(_BondState(a1, a2, order, aromatic, direction))

    def new_atom(state: _AtomState):
        nonlocal prev, pending
        atoms.append(state)
        idx = len(atoms) - 1
        if prev is not None:
            add_bond(prev, idx, pending)
            atoms[prev].order_entries.append(idx)
            state.order_entries.append(prev)
        if state.from_bracket and state.explicit_h == 1:
            state.order_entries.append(H_SENTINEL)
        prev = idx
        pending = None

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]

        if ch == "(":
            if prev is None:
                raise UnbalancedParenthesis("branch opened before any atom", i)
            if pending is not None:
                raise SmilesParseError("bond symbol before '('", i)
            branch_stack.append((prev, i))
            i += 1
            continue

        if ch == ")":
            if not branch_stack:
                raise UnbalancedParenthesis("unmatched ')'", i)
            if pending is not None:
                raise SmilesParseError("dangling bond before ')'", pending.offset)
            prev, _ = branch_stack.pop()
            i += 1
            continue

        if ch == ".":
            if branch_stack:
                raise SmilesParseError("dot separator inside a branch", i)
            if pending is not None:
                raise SmilesParseError("dangling bond before '.'", pending.offset)
            if prev is None:
                raise SmilesParseError("empty fragment before '.'", i)
            prev = None
            i += 1
            continue

        if ch in _BOND_ORDERS or ch == ":":
            if pending is not None:
                raise SmilesParseError("two bond symbols in a row", i)
            if ch == ":":
                pending = _PendingBond(order=1, aromatic=True, offset=i)
            else:
                pending = _PendingBond(order=_BOND_ORDERS[ch], offset=i)
            i += 1
            continue

        if ch in "/\\":
            if pending is not None:
                raise SmilesParseError("two bond symbols in a row", i)
            pending = _PendingBond(order=1, direction=1 if ch == "/" else -1, offset=i)
            i += 1
            continue

        if ch.isdigit() or ch == "%":
            if prev is None:
                raise SmilesParseError("ring closure before any atom", i)
            if ch == "%":
                if i + 2 >= n + 1 or not text[i + 1 : i + 3].isdigit():
                    raise SmilesParseError("'%' needs two digits", i)
                num = int(text[i + 1 : i + 3])
                width = 3
            else:
                num = int(ch)
                width = 1
            if num in rings:
                opened = rings.pop(num)
                if opened.atom == prev:
                    raise SmilesParseError(f"ring {num} closes onto its own atom", i)
                add_bond(opened.atom, prev, opened.pending, pending or _PendingBond(offset=i))
                # Resolve the placeholder on the opening atom's written order.
                entries = atoms[opened.atom].order_entries
                entries[entries.index(opened)] = prev
                atoms[prev].order_entries.append(opened.atom)
            else:
                opening = _RingOpen(prev, pending or _PendingBond(offset=i), i)
                rings[num] = opening
                atoms[prev].order_entries.append(opening)
            pending = None
            i += width
            continue

        if ch == "[":
            end = text.find("]", i)
            if end == -1:
                raise SmilesParseError("unterminated bracket atom", i)
            state = _parse_bracket(text[i + 1 : end], i + 1)
            new_atom(state)
            i = end + 1
            continue

        # Organic-subset atoms; two-letter symbols first.
        two = text[i : i + 2]
        if two in ("Cl", "Br"):
            new_atom(_AtomState(two, i))
            i += 2
            continue
        if ch in "BCNOPSFI":
            new_atom(_AtomState(ch, i))
            i += 1
            continue
        if ch in AROMATIC_SYMBOLS:
            new_atom(_AtomState(ch.upper(), i, aromatic=True))
            i += 1
            continue

        if ch.isalpha():
            raise UnknownElement(f"element {ch!r} needs brackets or is unknown", i)
        raise SmilesParseError(f"unexpected character {ch!r}", i)

    if pending is not None:
        raise SmilesParseError("dangling bond at end of input", pending.offset)
    if branch_stack:
        raise UnbalancedParenthesis("unclosed '('", branch_stack[-1][1])
    if rings:
        num, opened = next(iter(rings.items()))
        raise UnclosedRing(f"ring closure {num} never closed", opened.offset)
    if not atoms:
        raise SmilesParseError("no atoms in input", 0)

    return _finalize(atoms, bonds)


def _parse_bracket(body: str, offset: int) -> _AtomState:
    m = _BRACKET_RE.fullmatch(body)
    if m is None or not m.group("symbol"):
        if re.search(r":\d+$", body):
            raise SmilesParseError("atom-class labels are not supported", offset)
        raise SmilesParseError(f"malformed bracket atom [{body}]", offset)
    symbol = m.group("symbol")
    aromatic = symbol[0].islower()
    if aromatic:
        if symbol not in AROMATIC_SYMBOLS:
            raise UnknownElement(f"unknown aromatic symbol {symbol!r}", offset)
        element = symbol.upper()
    else:
        element = symbol
        if element not in SYMBOLS:
            raise UnknownElement(f"unknown element {element!r}", offset)

    isotope = int(m.group("isotope")) if m.group("isotope") else None
    h = m.group("hcount")
    explicit_h = 0
    if h:
        explicit_h = int(h[1:]) if len(h) > 1 else 1
    charge = 0
    c = m.group("charge")
    if c:
        if c in ("+", "-") or set(c) in ({"+"}, {"-"}):
            charge = len(c) if c[0] == "+" else -len(c)
        else:
            charge = int(c)
    if not -8 <= charge <= 8:
        raise InvalidCharge(f"charge {charge:+d} outside [-8, +8]", offset)
    return _AtomState(
        element,
        offset,
        isotope=isotope,
        charge=charge,
        explicit_h=explicit_h,
        aromatic=aromatic,
        parity_token=m.group("parity"),
        from_bracket=True,
    )


def _finalize(atom_states: list[_AtomState], bond_states: list[_BondState]) -> Molecule:
    """Derive hydrogen counts, check valences, normalize stereo markers."""
    n = len(atom_states)
    adj: list[list[tuple[int, _BondState]]] = [[] for _ in range(n)]
    for b in bond_states:
        adj[b.a1].append((b.a2, b))
        adj[b.a2].append((b.a1, b))

    hydrogens: list[int] = []
    for idx, st in enumerate(atom_states):
        plain_sum = sum(b.order for _, b in adj[idx] if not b.aromatic)
        n_aromatic = sum(1 for _, b in adj[idx] if b.aromatic)
        if st.from_bracket:
            h = st.explicit_h or 0
            if not st.aromatic and st.element in ORGANIC_SUBSET:
                total = plain_sum + n_aromatic + h
                if total > ORGANIC_SUBSET[st.element][-1] + abs(st.charge):
                    raise ValenceViolation(
                        f"{st.element} with charge {st.charge:+d} cannot carry "
                        f"{total} bonds", st.offset)
        elif st.aromatic:
            lowest = ORGANIC_SUBSET[st.element][0]
            h = max(0, lowest - (plain_sum + n_aromatic + 1))
        else:
            total = plain_sum + n_aromatic
            valence = smallest_valence(st.element, total)
            if valence is None:
                raise ValenceViolation(
                    f"{st.element} cannot carry {total} bonds", st.offset)
            h = valence - total
        hydrogens.append(h)

    parities: list[int | None] = []
    for idx, st in enumerate(atom_states):
        if st.parity_token is None:
            parities.append(None)
            continue
        entries = st.order_entries
        if len(entries) != 4 or any(isinstance(e, _RingOpen) for e in entries):
            parities.append(None)  # parity undefined off tetrahedral centers
            continue
        written = st.parity_token == "@@"  # 0 for '@', 1 for '@@'
        flip = sequence_parity(list(entries), sorted(entries))
        parities.append(int(written) ^ flip)

    stereo = _double_bond_stereo(atom_states, bond_states, adj)

    atoms = tuple(
        Atom(
            st.element,
            isotope=st.isotope,
            charge=st.charge,
            explicit_h=st.explicit_h if st.from_bracket else None,
            aromatic=st.aromatic,
            hydrogens=hydrogens[i],
            parity=parities[i],
        )
        for i, st in enumerate(atom_states)
    )
    bonds = tuple(
        Bond(b.a1, b.a2, b.order, b.aromatic, stereo.get(id(b)))
        for b in bond_states
    )
    return Molecule(atoms, bonds)


def _double_bond_stereo(
    atom_states: list[_AtomState],
    bond_states: list[_BondState],
    adj: list[list[tuple[int, _BondState]]],
) -> dict[int, str]:
    """Normalize `/` `\\` markers into per-double-bond cis/trans descriptors.

    The descriptor is relative to the lowest-index substituent on each end.
    Conflicting or one-sided markers are dropped rather than rejected.
    """
    out: dict[int, str] = {}
    for b in bond_states:
        if b.order != 2 or b.aromatic:
            continue
        sides = []
        for end, other in ((b.a1, b.a2), (b.a2, b.a1)):
            candidates = []
            for nbr, nb in adj[end]:
                if nbr == other or nb.direction is None or nb.order != 1:
                    continue
                from_atom, sign = nb.direction
                sigma = sign if from_atom == nbr else -sign
                candidates.append((nbr, sigma))
            if not candidates:
                sides = []
                break
            if len(candidates) == 2 and candidates[0][1] == candidates[1][1]:
                sides = []  # both substituents marked on the same side
                break
            subs = [nbr for nbr, _ in adj[end] if nbr != other]
            ref = min(subs)
            nbr, sigma = candidates[0]
            if nbr != ref:
                sigma = -sigma
            sides.append(sigma)
        if len(sides) == 2:
            out[id(b)] = TRANS if sides[0] * sides[1] == -1 else CIS
    return out

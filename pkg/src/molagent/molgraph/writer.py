"""SMILES emission for molecular graphs.

One traversal routine serves both the plain writer (atom-index priority) and
the canonicalizer (rank priority): atoms are visited depth-first in priority
order, ring-closure digits are allocated in print order, and stereo markers
are re-derived for the emitted neighbor order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from molagent.elements import AROMATIC_SYMBOLS, ORGANIC_SUBSET
from molagent.molgraph.model import (
    CIS,
    H_SENTINEL,
    Bond,
    Molecule,
    sequence_parity,
    smallest_valence,
)


@dataclass
class _Tree:
    start: int
    parent: dict[int, int | None] = field(default_factory=dict)
    tree_bond: dict[int, Bond] = field(default_factory=dict)
    children: dict[int, list[int]] = field(default_factory=dict)
    # (descendant, ancestor, bond) in discovery order.
    back_edges: list[tuple[int, int, Bond]] = field(default_factory=list)
    preorder: list[int] = field(default_factory=list)


def _build_tree(mol: Molecule, comp: list[int], priority: dict[int, int]) -> _Tree:
    start = min(comp, key=lambda i: priority[i])
    tree = _Tree(start)
    tree.parent[start] = None
    tree.children[start] = []
    tree.preorder.append(start)
    visited = {start}
    used: set[tuple[int, int]] = set()

    def ordered(v: int):
        return sorted(mol.neighbors(v), key=lambda nb: priority[nb[0]])

    frames: list[tuple[int, list]] = [(start, ordered(start))]
    while frames:
        v, nbrs = frames[-1]
        advanced = False
        while nbrs:
            w, b = nbrs.pop(0)
            if b.key() in used:
                continue
            used.add(b.key())
            if w in visited:
                tree.back_edges.append((v, w, b))
                continue
            visited.add(w)
            tree.parent[w] = v
            tree.tree_bond[w] = b
            tree.children.setdefault(v, []).append(w)
            tree.children.setdefault(w, [])
            tree.preorder.append(w)
            frames.append((w, ordered(w)))
            advanced = True
            break
        if not advanced:
            frames.pop()
    return tree


def _ring_digits(tree: _Tree) -> tuple[dict[int, list[tuple[int, int, Bond]]], dict[int, list[tuple[int, int, Bond]]]]:
    """Assign ring-closure digits in print order.

    Returns (opens, closes): atom -> list of (digit, other_atom, bond), with
    opens keyed by the ancestor endpoint and closes by the descendant.
    """
    pos = {a: i for i, a in enumerate(tree.preorder)}
    opens: dict[int, list[tuple[int, int, Bond]]] = {}
    closes: dict[int, list[tuple[int, int, Bond]]] = {}
    # Openings at an atom, ordered by when the edge was discovered.
    pending_opens: dict[int, list[tuple[int, Bond]]] = {}
    pending_closes: dict[int, list[tuple[int, Bond]]] = {}
    for desc, anc, bond in tree.back_edges:
        pending_opens.setdefault(anc, []).append((desc, bond))
        pending_closes.setdefault(desc, []).append((anc, bond))

    free = list(range(1, 100))
    digit_of: dict[tuple[int, int], int] = {}
    for atom in tree.preorder:
        for desc, bond in pending_opens.get(atom, []):
            digit = free.pop(0)
            digit_of[bond.key()] = digit
            opens.setdefault(atom, []).append((digit, desc, bond))
        for anc, bond in pending_closes.get(atom, []):
            digit = digit_of[bond.key()]
            closes.setdefault(atom, []).append((digit, anc, bond))
            free.append(digit)
            free.sort()
    return opens, closes


def _bond_symbol(mol: Molecule, bond: Bond) -> str:
    both_aromatic = mol.atoms[bond.a1].aromatic and mol.atoms[bond.a2].aromatic
    if bond.aromatic:
        return "" if both_aromatic else ":"
    if bond.order == 1:
        return "-" if both_aromatic else ""
    return "=" if bond.order == 2 else "#"


def _implied_hydrogens(mol: Molecule, idx: int) -> int | None:
    atom = mol.atoms[idx]
    plain = sum(b.order for _, b in mol.neighbors(idx) if not b.aromatic)
    n_arom = sum(1 for _, b in mol.neighbors(idx) if b.aromatic)
    if atom.aromatic:
        lowest = ORGANIC_SUBSET[atom.element][0]
        return max(0, lowest - (plain + n_arom + 1))
    valence = smallest_valence(atom.element, plain + n_arom)
    return None if valence is None else valence - (plain + n_arom)


def _atom_token(mol: Molecule, idx: int, parity_out: int | None) -> str:
    atom = mol.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    bare_ok = (
        atom.element in ORGANIC_SUBSET
        and atom.charge == 0
        and atom.isotope is None
        and parity_out is None
        and (not atom.aromatic or symbol in AROMATIC_SYMBOLS)
        and _implied_hydrogens(mol, idx) == atom.hydrogens
    )
    if bare_ok:
        return symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    if parity_out is not None:
        parts.append("@@" if parity_out else "@")
    if atom.hydrogens == 1:
        parts.append("H")
    elif atom.hydrogens > 1:
        parts.append(f"H{atom.hydrogens}")
    if atom.charge:
        sign = "+" if atom.charge > 0 else "-"
        parts.append(sign if abs(atom.charge) == 1 else f"{sign}{abs(atom.charge)}")
    parts.append("]")
    return "".join(parts)


def _solve_directions(mol: Molecule, tree: _Tree) -> dict[tuple[int, int], int]:
    """Pick / and \\ orientations satisfying every cis/trans descriptor.

    Returns bond key -> token sign, where the sign is the printed token
    ('/' = +1) in the bond's emission direction.
    """
    marker_for: dict[tuple[tuple[int, int], int], tuple[tuple[int, int], int, int]] = {}

    def pick_marker(end: int, other: int):
        """Marker single bond at `end`: (bond key, neighbor, emission factor)."""
        parent = tree.parent.get(end)
        if parent is not None and parent != other:
            b = tree.tree_bond[end]
            if b.order == 1 and not b.aromatic:
                return (b.key(), parent, 1)  # emitted parent -> end
        for child in tree.children.get(end, []):
            b = tree.tree_bond[child]
            if b.order == 1 and not b.aromatic:
                return (b.key(), child, -1)  # emitted end -> child
        for desc, anc, b in tree.back_edges:
            if b.order != 1 or b.aromatic:
                continue
            if desc == end:
                return (b.key(), anc, -1)  # token reads desc -> anc
            if anc == end:
                return (b.key(), desc, 1)
        return None

    # Each descriptor reduces to sign(marker1) * sign(marker2) == c.
    adjacency: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
    for b in mol.bonds:
        if b.stereo is None:
            continue
        m1 = pick_marker(b.a1, b.a2)
        m2 = pick_marker(b.a2, b.a1)
        if m1 is None or m2 is None or m1[0] == m2[0]:
            continue
        required = 1 if b.stereo == CIS else -1
        for end, other, marker in ((b.a1, b.a2, m1), (b.a2, b.a1, m2)):
            subs = [w for w, _ in mol.neighbors(end) if w != other]
            if marker[1] != min(subs):
                required = -required
        (k1, _, f1), (k2, _, f2) = m1, m2
        c = required * f1 * f2
        adjacency.setdefault(k1, []).append((k2, c))
        adjacency.setdefault(k2, []).append((k1, c))

    # Print position of a marker token: tree bonds print at the child atom,
    # ring closures at the descendant endpoint.
    pos = {a: i for i, a in enumerate(tree.preorder)}
    token_pos: dict[tuple[int, int], int] = {}
    for child, b in tree.tree_bond.items():
        token_pos[b.key()] = pos[child]
    for desc, _anc, b in tree.back_edges:
        token_pos[b.key()] = pos[desc]

    signs: dict[tuple[int, int], int] = {}
    for seed in adjacency:
        if seed in signs:
            continue
        component = [seed]
        signs[seed] = 1
        queue = [seed]
        while queue:
            k = queue.pop()
            for k2, c in adjacency[k]:
                want = c * signs[k]
                if k2 not in signs:
                    signs[k2] = want
                    component.append(k2)
                    queue.append(k2)
                # A contradiction cannot arise from a molecule built by the
                # parser; if it does, the earlier assignment wins.
        # The assignment is only fixed up to a global flip per component;
        # anchor it so the earliest-printed token is '/'.
        first = min(component, key=lambda k: token_pos.get(k, 1 << 30))
        if signs[first] < 0:
            for k in component:
                signs[k] = -signs[k]
    return signs


def emit_component(
    mol: Molecule,
    comp: list[int],
    priority: dict[int, int] | list[int],
    stereo: bool = True,
) -> str:
    """Write one connected component, visiting atoms in priority order."""
    if isinstance(priority, (list, tuple)):
        priority = {i: priority[i] for i in comp}
    tree = _build_tree(mol, comp, priority)
    opens, closes = _ring_digits(tree)
    signs = _solve_directions(mol, tree) if stereo else {}

    def direction_token(bond: Bond) -> str | None:
        sign = signs.get(bond.key())
        if sign is None:
            return None
        return "/" if sign > 0 else "\\"

    def parity_out(v: int) -> int | None:
        atom = mol.atoms[v]
        if not stereo or atom.parity is None:
            return None
        entries: list[int] = []
        if tree.parent[v] is not None:
            entries.append(tree.parent[v])
        if atom.hydrogens == 1 and mol.degree(v) == 3:
            entries.append(H_SENTINEL)
        for _, other, _b in closes.get(v, []):
            entries.append(other)
        for _, other, _b in opens.get(v, []):
            entries.append(other)
        entries.extend(tree.children[v])
        if len(entries) != 4:
            return None
        return atom.parity ^ sequence_parity(sorted(entries), entries)

    out: list[str] = []

    def write_atom(v: int):
        out.append(_atom_token(mol, v, parity_out(v)))
        for digit, _other, bond in closes.get(v, []):
            token = direction_token(bond)
            if token:
                out.append(token)
            out.append(str(digit) if digit < 10 else f"%{digit:02d}")
        for digit, _other, bond in opens.get(v, []):
            sym = _bond_symbol(mol, bond)
            if sym and direction_token(bond) is None:
                out.append(sym)
            out.append(str(digit) if digit < 10 else f"%{digit:02d}")
        kids = tree.children[v]
        for pos, child in enumerate(kids):
            bond = tree.tree_bond[child]
            chunk_open = pos < len(kids) - 1
            if chunk_open:
                out.append("(")
            token = direction_token(bond)
            out.append(token if token else _bond_symbol(mol, bond))
            write_atom(child)
            if chunk_open:
                out.append(")")

    write_atom(tree.start)
    return "".join(out)


def write_smiles(mol: Molecule, stereo: bool = True) -> str:
    """Write a SMILES string preserving the molecule's fragment order."""
    comps: dict[int, list[int]] = {}
    for i, label in enumerate(mol.component_labels):
        comps.setdefault(label, []).append(i)
    identity = list(range(len(mol.atoms)))
    return ".".join(
        emit_component(mol, comps[label], identity, stereo=stereo)
        for label in sorted(comps)
    )

"""Shared plain-text formatting for tool outputs.

One formatter keeps traces reproducible: stable key order and fixed float
formatting (6 significant digits everywhere except the calculator, which
renders at full precision).
"""

from __future__ import annotations


def fmt_sig(value: float, sig: int = 6) -> str:
    """Format with at most `sig` significant digits, no exponent for
    ordinary magnitudes, and no trailing zeros."""
    if value == 0:
        return "0"
    text = f"{value:.{sig}g}"
    if "e" in text or "E" in text:
        f = float(text)
        if 1e-6 < abs(f) < 1e16:
            text = f"{f:.{sig + 6}f}".rstrip("0").rstrip(".")
    return text


def fmt_percent(p: float) -> str:
    return f"{p * 100:.2f}%"


def render_atom_counts(counts: dict[str, int]) -> str:
    """Render as {C:2, N:1, H:3}: carbon first, heavies alphabetical, H last."""
    order: list[str] = []
    if "C" in counts:
        order.append("C")
    order.extend(sorted(s for s in counts if s not in ("C", "H")))
    if "H" in counts:
        order.append("H")
    inner = ", ".join(f"{s}:{counts[s]}" for s in order)
    return "{" + inner + "}"


def render_group_matches(matches: list[tuple[str, frozenset[int]]]) -> str:
    if not matches:
        return "No functional groups from the pattern library were found."
    parts = [
        f"{name} (atoms {','.join(str(i) for i in sorted(atoms))})"
        for name, atoms in matches
    ]
    return "; ".join(parts)

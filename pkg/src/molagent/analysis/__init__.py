"""Fingerprints, Tanimoto similarity, and functional-group detection."""

from molagent.analysis.fingerprints import (
    DEFAULT_NBITS,
    DEFAULT_RADIUS,
    Fingerprint,
    WidthMismatch,
    fingerprint,
    tanimoto,
)
from molagent.analysis.groups import (
    AtomConstraint,
    GroupPattern,
    default_patterns,
    find_functional_groups,
    find_pattern,
    load_patterns,
    verify_match,
)

__all__ = [
    "AtomConstraint",
    "DEFAULT_NBITS",
    "DEFAULT_RADIUS",
    "Fingerprint",
    "GroupPattern",
    "WidthMismatch",
    "default_patterns",
    "find_functional_groups",
    "find_pattern",
    "fingerprint",
    "load_patterns",
    "tanimoto",
    "verify_match",
]

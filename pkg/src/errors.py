"""
errors.py — Exception Hierarchy
================================

Every failure the library raises derives from RokhlinError so the CLI can
catch one type at the top level and turn it into exit code 1.

Verification operations (verify_tower, check_colouring_cycle, verify_suite)
do NOT raise on failed checks; they return reports with witnesses. The
exceptions below are for violated preconditions and aborted pipeline runs.
"""

from typing import Any, Optional


class RokhlinError(Exception):
    """Base class for all library errors."""


# ── Precondition errors (also ValueErrors) ───────────────────────────

class DimensionMismatchError(RokhlinError, ValueError):
    """Two lattice objects live in different ambient dimensions."""


class ArityError(RokhlinError, ValueError):
    """An operation received a chain of the wrong arity."""


class InvalidIndexError(RokhlinError, ValueError):
    """A cover index or tower index is not part of the partition."""


class RankDeficientError(RokhlinError, ValueError):
    """A basis matrix does not have the rank the operation requires.

    Raised by Sublattice for dependent columns and by coset_representatives
    and build_tower for subgroups of infinite index.
    """


class UnresolvableVertexError(RokhlinError, ValueError):
    """A subset vertex cannot be resolved against the fundamental domain."""


class UnsupportedDimensionError(RokhlinError, ValueError):
    """A generator was asked for a dimension outside its supported range."""


class ConfigError(RokhlinError, ValueError):
    """Missing or inconsistent pipeline configuration.

    Also covers unreadable chain or config files and the max_modulus guard.
    """


# ── Aborted runs ─────────────────────────────────────────────────────

class TowerVerificationError(RokhlinError):
    """A Rokhlin tower failed one of its checks.

    Attributes:
        report: the TowerReport with the failing checks and their witnesses.
    """

    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class ColouringError(RokhlinError):
    """A tuple of the input cycle has no colouring witness.

    Attributes:
        tuple: the offending tuple (as stored in the chain).
    """

    def __init__(self, message: str, offending: Optional[tuple] = None) -> None:
        super().__init__(message)
        self.tuple = offending


class EstimateViolationError(RokhlinError):
    """A measured norm exceeded the bound it is certified against."""

    def __init__(self, message: str, measured: Any = None, bound: Any = None) -> None:
        super().__init__(message)
        self.measured = measured
        self.bound = bound

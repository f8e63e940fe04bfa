"""
group_lattice.py — The Acting Group Z^k, Sublattices and Følner Boxes
======================================================================

Exact model of the acting group Γ = Z^k and of the amenable subgroups Γ_i
used by the Rokhlin towers.

    LatticeElement    an element of Z^k (group law written additively)
    Sublattice        the subgroup spanned by the columns of an integer basis
    FolnerSet         a finite shape T ⊂ Γ containing the identity
    FiniteGenSet      a finite set F ⊂ Γ (the set the shapes must almost fix)

Følner sets are always boxes {Σ a_l·b_l : 0 <= a_l < N} over a sublattice
basis. Their invariance defect |F·T △ T| / |T| is computed exactly as a
Fraction.

Rank, membership and index are decided exactly with sympy matrices; numpy is
used with dtype=object for the basis matrix so products stay arbitrary-precision.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from src.errors import DimensionMismatchError, RankDeficientError


# ═══════════════════════════════════════════════════════════════════════
# GROUP ELEMENTS
# ═══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True, order=True)
class LatticeElement:
    """An element of Z^k. Ordering is lexicographic on the coordinates,
    which is translation-invariant."""

    coords: Tuple[int, ...]

    @classmethod
    def of(cls, *coords: int) -> "LatticeElement":
        return cls(tuple(int(c) for c in coords))

    @classmethod
    def zero(cls, dim: int) -> "LatticeElement":
        return cls((0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "LatticeElement") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dim} vs {other.dim}"
            )

    def __add__(self, other: "LatticeElement") -> "LatticeElement":
        self._check(other)
        return LatticeElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeElement":
        return LatticeElement(tuple(-a for a in self.coords))

    def __sub__(self, other: "LatticeElement") -> "LatticeElement":
        self._check(other)
        return LatticeElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def reduce(self, modulus: int) -> Tuple[int, ...]:
        """Residue of the element in (Z/modulus)^k."""
        return tuple(c % modulus for c in self.coords)

    def __repr__(self) -> str:
        return f"({', '.join(str(c) for c in self.coords)})"


def compose(g: LatticeElement, h: LatticeElement) -> LatticeElement:
    """Group law of Z^k (componentwise sum)."""
    return g + h


def inverse(g: LatticeElement) -> LatticeElement:
    """Group inverse (negation)."""
    return -g


# ═══════════════════════════════════════════════════════════════════════
# EXACT LINEAR ALGEBRA
# ═══════════════════════════════════════════════════════════════════════

def _basis_matrix(columns: Sequence[Sequence[int]], dim: int) -> Matrix:
    """The dim×r sympy matrix whose columns are the given vectors."""
    return Matrix(dim, len(columns), lambda i, j: columns[j][i])


def _rank(columns: Sequence[Sequence[int]], dim: int) -> int:
    """Rank over Q; the empty column list has rank 0."""
    if not columns:
        return 0
    return _basis_matrix(columns, dim).rank()


def _solve(columns: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[Tuple[Fraction, ...]]:
    """Solve Σ a_l·columns[l] = target over Q for independent columns.

    Returns None when the system is inconsistent.
    """
    if not columns:
        return () if not any(target) else None
    try:
        solution, _ = _basis_matrix(columns, len(target)).gauss_jordan_solve(Matrix(list(target)))
    except ValueError:
        return None
    return tuple(Fraction(int(v.p), int(v.q)) for v in solution)


def _determinant(columns: Sequence[Sequence[int]]) -> int:
    """Integer determinant of a square basis; its absolute value is the index."""
    return int(_basis_matrix(columns, len(columns)).det())


# ═══════════════════════════════════════════════════════════════════════
# SUBLATTICES
# ═══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Sublattice:
    """The subgroup of Z^k spanned by the basis columns.

    Attributes:
        ambient_dim: k
        basis:       r columns of length k, linearly independent (r <= k)
    """

    ambient_dim: int
    basis: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cols = tuple(tuple(int(v) for v in col) for col in self.basis)
        object.__setattr__(self, "basis", cols)
        for col in cols:
            if len(col) != self.ambient_dim:
                raise DimensionMismatchError(
                    f"basis column {col} does not have length {self.ambient_dim}"
                )
        if len(cols) > self.ambient_dim or _rank(cols, self.ambient_dim) != len(cols):
            raise RankDeficientError(f"basis columns {cols} are not linearly independent")

    @classmethod
    def standard(cls, dim: int) -> "Sublattice":
        """Z^k with the unit basis."""
        return cls(dim, tuple(tuple(int(i == j) for i in range(dim)) for j in range(dim)))

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]]) -> "Sublattice":
        cols = tuple(tuple(c) for c in columns)
        if not cols:
            raise RankDeficientError("a sublattice needs at least one basis column")
        return cls(len(cols[0]), cols)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        """The k×r basis matrix with exact integer entries."""
        return np.array(self.basis, dtype=object).T.reshape(self.ambient_dim, self.rank)

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def combination(self, coefficients: Sequence[int]) -> LatticeElement:
        """Σ a_l·b_l for integer coefficients a."""
        vec = self.matrix.dot(np.array(list(coefficients), dtype=object))
        return LatticeElement(tuple(int(v) for v in vec))

    def coordinates(self, g: LatticeElement) -> Optional[Tuple[Fraction, ...]]:
        """Rational coordinates of g in the basis, or None outside the span."""
        if g.dim != self.ambient_dim:
            raise DimensionMismatchError(f"dimension mismatch: {g.dim} vs {self.ambient_dim}")
        return _solve(self.basis, g.coords)

    def contains(self, g: LatticeElement) -> bool:
        coords = self.coordinates(g)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def __contains__(self, g: LatticeElement) -> bool:
        return self.contains(g)

    def index(self) -> Optional[int]:
        """[Z^k : L] for full-rank L, None when the index is infinite."""
        if not self.is_full_rank():
            return None
        return abs(_determinant(self.basis))

    def coset_representatives(self) -> Tuple[LatticeElement, ...]:
        """Lexicographically least representatives of Z^k / L inside [0, index)^k."""
        d = self.index()
        if d is None:
            raise RankDeficientError(
                f"sublattice of rank {self.rank} < {self.ambient_dim} has infinite index"
            )
        reps: List[LatticeElement] = []
        for point in itertools.product(range(d), repeat=self.ambient_dim):
            candidate = LatticeElement(point)
            if not any(self.contains(candidate - rep) for rep in reps):
                reps.append(candidate)
                if len(reps) == d:
                    break
        return tuple(reps)


# ═══════════════════════════════════════════════════════════════════════
# FINITE SUBSETS OF Γ
# ═══════════════════════════════════════════════════════════════════════

def _common_dim(elements: Iterable[LatticeElement]) -> Optional[int]:
    """The shared dimension, None for an empty collection."""
    dims = {g.dim for g in elements}
    if len(dims) > 1:
        raise DimensionMismatchError(f"mixed dimensions {sorted(dims)}")
    return next(iter(dims), None)


@dataclass(frozen=True)
class FiniteGenSet:
    """A finite set F ⊂ Γ."""

    elements: FrozenSet[LatticeElement]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", frozenset(self.elements))
        _common_dim(self.elements)

    @classmethod
    def of(cls, *elements: Sequence[int]) -> "FiniteGenSet":
        return cls(frozenset(LatticeElement(tuple(e)) for e in elements))

    def __iter__(self) -> Iterator[LatticeElement]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: LatticeElement) -> bool:
        return g in self.elements

    def symmetrized(self) -> "FiniteGenSet":
        """F ∪ F^{-1}."""
        return FiniteGenSet(self.elements | {-g for g in self.elements})

    def with_identity(self, dim: int) -> "FiniteGenSet":
        """F ∪ {0}; dim is needed when F is empty."""
        return FiniteGenSet(self.elements | {LatticeElement.zero(dim)})

    def restrict(self, subgroup: Sublattice) -> "FiniteGenSet":
        """F ∩ Γ_i."""
        return FiniteGenSet(frozenset(g for g in self.elements if subgroup.contains(g)))


@dataclass(frozen=True)
class FolnerSet:
    """A non-empty finite shape T ⊂ Γ containing the identity."""

    elements: FrozenSet[LatticeElement]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", frozenset(self.elements))
        dim = _common_dim(self.elements)
        if dim is None:
            raise ValueError("a Følner set must be non-empty")
        if LatticeElement.zero(dim) not in self.elements:
            raise ValueError("a Følner set must contain the identity")

    @property
    def dim(self) -> int:
        return next(iter(self.elements)).dim

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[LatticeElement]:
        return iter(sorted(self.elements))

    def __contains__(self, g: LatticeElement) -> bool:
        return g in self.elements

    def inverse(self) -> "FolnerSet":
        """T^{-1}."""
        return FolnerSet(frozenset(-t for t in self.elements))

    def translate(self, g: LatticeElement) -> FrozenSet[LatticeElement]:
        """g·T (no longer a Følner set in general)."""
        return frozenset(g + t for t in self.elements)


def folner_box(subgroup: Sublattice, n: int) -> FolnerSet:
    """The box {Σ a_l·b_l : 0 <= a_l < n} over the basis of the subgroup."""
    if n < 1:
        raise ValueError(f"box side must be positive, got {n}")
    if subgroup.rank == 0:
        return FolnerSet(frozenset({LatticeElement.zero(subgroup.ambient_dim)}))
    grid = np.indices((n,) * subgroup.rank).reshape(subgroup.rank, -1).astype(object)
    points = subgroup.matrix.dot(grid)
    return FolnerSet(frozenset(
        LatticeElement(tuple(int(v) for v in points[:, col]))
        for col in range(points.shape[1])
    ))


def invariance_defect(shape: FolnerSet, generators: FiniteGenSet) -> Fraction:
    """|F·T △ T| / |T| as an exact rational."""
    moved = {f + t for f in generators.elements for t in shape.elements}
    return Fraction(len(moved.symmetric_difference(shape.elements)), len(shape))


def boundary_defect(shape: FolnerSet, g: LatticeElement) -> int:
    """|g·T \\ T|; certify_estimate logs its sum over the colouring witnesses."""
    return sum(1 for t in shape.elements if g + t not in shape.elements)

"""
odometer.py — Exact Measure Algebra on the Odometer of Z^k
============================================================

The parameter space X is the profinite completion of Z^k (the odometer)
with Γ = Z^k acting by translation and μ the Haar probability measure.

Every measurable set the pipeline produces is a congruence set: a union of
residue classes modulo a single scalar modulus m. Measures are exact:

    μ(A) = |residues| / m^k

CongruenceSet     a set of residues in (Z/m)^k
StepFunction      an integer-valued function, constant on residue classes

Canonical form:
    Both types are stored at their minimal scalar period (the smallest m for
    which the set/function is invariant under m·Z^k). The set of periods is
    closed under gcd, so the minimal period is unique and equality after
    construction is plain structural equality.

Memory is O(m^k) per value; desk scale is k <= 3, m <= 1000.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from sympy import primefactors

from src.errors import DimensionMismatchError
from src.group_lattice import LatticeElement

Residue = Tuple[int, ...]
PointLike = Union[LatticeElement, Sequence[int]]


def lifts(residue: Residue, modulus: int, target: int) -> Iterator[Residue]:
    """All residues mod target reducing to the given residue mod modulus."""
    steps = range(target // modulus)
    for q in itertools.product(steps, repeat=len(residue)):
        yield tuple(r + modulus * s for r, s in zip(residue, q))


def _coords(point: PointLike) -> Tuple[int, ...]:
    return point.coords if isinstance(point, LatticeElement) else tuple(point)


def all_residues(dim: int, modulus: int) -> Iterator[Residue]:
    return itertools.product(range(modulus), repeat=dim)


# ═══════════════════════════════════════════════════════════════════════
# CONGRUENCE SETS
# ═══════════════════════════════════════════════════════════════════════

def _coarsen_set(dim: int, modulus: int, residues: FrozenSet[Residue]) -> Tuple[int, FrozenSet[Residue]]:
    m, res = modulus, residues
    for p in primefactors(modulus):
        while m % p == 0:
            d = m // p
            reduced = frozenset(tuple(c % d for c in r) for r in res)
            if len(reduced) * p ** dim != len(res):
                break
            m, res = d, reduced
    return m, res


@dataclass(frozen=True)
class CongruenceSet:
    """A union of residue classes of Z^k modulo a scalar modulus."""

    dim: int
    modulus: int
    residues: FrozenSet[Residue]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        residues = frozenset(tuple(int(c) for c in r) for r in self.residues)
        for r in residues:
            if len(r) != self.dim:
                raise DimensionMismatchError(f"residue {r} does not have length {self.dim}")
            if any(c < 0 or c >= self.modulus for c in r):
                raise ValueError(f"residue {r} outside [0, {self.modulus})^{self.dim}")
        m, residues = _coarsen_set(self.dim, self.modulus, residues)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "residues", residues)

    # ── constructors ────────────────────────────────────────────────────

    @classmethod
    def full(cls, dim: int) -> "CongruenceSet":
        return cls(dim, 1, frozenset({(0,) * dim}))

    @classmethod
    def empty(cls, dim: int) -> "CongruenceSet":
        return cls(dim, 1, frozenset())

    @classmethod
    def congruence(cls, modulus: int, *residues: Sequence[int]) -> "CongruenceSet":
        """{x ≡ r mod modulus} for the listed residues (taken mod modulus)."""
        if not residues:
            raise ValueError("at least one residue is needed to infer the dimension")
        return cls(
            len(residues[0]),
            modulus,
            frozenset(tuple(c % modulus for c in r) for r in residues),
        )

    # ── structure ───────────────────────────────────────────────────────

    def _check(self, other: "CongruenceSet") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def refine(self, target: int) -> FrozenSet[Residue]:
        """The residue set at a multiple of the modulus."""
        if target % self.modulus:
            raise ValueError(f"{target} is not a multiple of modulus {self.modulus}")
        if target == self.modulus:
            return self.residues
        return frozenset(
            lift for r in self.residues for lift in lifts(r, self.modulus, target)
        )

    def contains(self, point: PointLike) -> bool:
        return tuple(c % self.modulus for c in _coords(point)) in self.residues

    def __contains__(self, point: PointLike) -> bool:
        return self.contains(point)

    def is_empty(self) -> bool:
        return not self.residues

    def measure(self) -> Fraction:
        return Fraction(len(self.residues), self.modulus ** self.dim)

    # ── Γ-action and Boolean algebra ────────────────────────────────────

    def translate(self, g: LatticeElement) -> "CongruenceSet":
        if g.dim != self.dim:
            raise DimensionMismatchError(f"dimension mismatch: {g.dim} vs {self.dim}")
        m = self.modulus
        return CongruenceSet(
            self.dim, m,
            frozenset(tuple((c + s) % m for c, s in zip(r, g.coords)) for r in self.residues),
        )

    def _binary(self, other: "CongruenceSet", keep) -> "CongruenceSet":
        self._check(other)
        m = lcm(self.modulus, other.modulus)
        mine = self.refine(m)
        theirs = other.refine(m)
        return CongruenceSet(self.dim, m, keep(mine, theirs))

    def intersect(self, other: "CongruenceSet") -> "CongruenceSet":
        self._check(other)
        m = lcm(self.modulus, other.modulus)
        om = other.modulus
        return CongruenceSet(
            self.dim, m,
            frozenset(r for r in self.refine(m) if tuple(c % om for c in r) in other.residues),
        )

    def union(self, other: "CongruenceSet") -> "CongruenceSet":
        return self._binary(other, lambda a, b: a | b)

    def difference(self, other: "CongruenceSet") -> "CongruenceSet":
        return self._binary(other, lambda a, b: a - b)

    def complement(self) -> "CongruenceSet":
        return CongruenceSet.full(self.dim).difference(self)

    def __and__(self, other: "CongruenceSet") -> "CongruenceSet":
        return self.intersect(other)

    def __or__(self, other: "CongruenceSet") -> "CongruenceSet":
        return self.union(other)

    def __repr__(self) -> str:
        shown = sorted(self.residues)[:4]
        more = "..." if len(self.residues) > 4 else ""
        return f"CongruenceSet(m={self.modulus}, residues={shown}{more})"


def translate(g: LatticeElement, subset: CongruenceSet) -> CongruenceSet:
    return subset.translate(g)


def intersect(a: CongruenceSet, b: CongruenceSet) -> CongruenceSet:
    return a.intersect(b)


def measure(subset: CongruenceSet) -> Fraction:
    return subset.measure()


# ═══════════════════════════════════════════════════════════════════════
# STEP FUNCTIONS
# ═══════════════════════════════════════════════════════════════════════

def _coarsen_values(dim: int, modulus: int, values: Dict[Residue, int]) -> Tuple[int, Dict[Residue, int]]:
    m, vals = modulus, values
    for p in primefactors(modulus):
        while m % p == 0:
            d = m // p
            reduced: Dict[Residue, int] = {}
            consistent = True
            for r, v in vals.items():
                key = tuple(c % d for c in r)
                if reduced.setdefault(key, v) != v:
                    consistent = False
                    break
            if not consistent or len(reduced) * p ** dim != len(vals):
                break
            m, vals = d, reduced
    return m, vals


@dataclass(frozen=True)
class StepFunction:
    """An integer-valued function on X, constant on residue classes.

    Attributes:
        dim:     k
        modulus: the minimal scalar period
        values:  sorted (residue, value) pairs, zero values omitted
    """

    dim: int
    modulus: int
    values: Tuple[Tuple[Residue, int], ...]

    def __post_init__(self) -> None:
        raw: Dict[Residue, int] = {}
        for r, v in self.values:
            r = tuple(int(c) for c in r)
            if len(r) != self.dim:
                raise DimensionMismatchError(f"residue {r} does not have length {self.dim}")
            if int(v):
                raw[r] = int(v)
        m, vals = _coarsen_values(self.dim, self.modulus, raw)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "values", tuple(sorted(vals.items())))

    @classmethod
    def from_map(cls, dim: int, modulus: int, values: Mapping[Residue, int]) -> "StepFunction":
        return cls(dim, modulus, tuple(values.items()))

    @classmethod
    def zero(cls, dim: int) -> "StepFunction":
        return cls(dim, 1, ())

    @classmethod
    def constant(cls, dim: int, value: int) -> "StepFunction":
        return cls(dim, 1, (((0,) * dim, value),))

    @classmethod
    def indicator(cls, subset: CongruenceSet, coefficient: int = 1) -> "StepFunction":
        return cls(subset.dim, subset.modulus, tuple((r, coefficient) for r in subset.residues))

    @classmethod
    def from_terms(cls, dim: int, terms: Iterable[Tuple[CongruenceSet, int]]) -> "StepFunction":
        """Σ coefficient·χ_set; overlapping sets are summed pointwise."""
        total = cls.zero(dim)
        for subset, coefficient in terms:
            total = total + cls.indicator(subset, coefficient)
        return total

    def value_map(self, target: int) -> Dict[Residue, int]:
        if target % self.modulus:
            raise ValueError(f"{target} is not a multiple of modulus {self.modulus}")
        return {
            lift: v for r, v in self.values for lift in lifts(r, self.modulus, target)
        }

    @property
    def terms(self) -> Tuple[Tuple[CongruenceSet, int], ...]:
        """Disjoint (set, coefficient) terms, one per distinct non-zero value."""
        by_value: Dict[int, set] = {}
        for r, v in self.values:
            by_value.setdefault(v, set()).add(r)
        return tuple(
            (CongruenceSet(self.dim, self.modulus, frozenset(rs)), v)
            for v, rs in sorted(by_value.items())
        )

    def support(self) -> CongruenceSet:
        return CongruenceSet(self.dim, self.modulus, frozenset(r for r, _ in self.values))

    def is_zero(self) -> bool:
        return not self.values

    def __bool__(self) -> bool:
        return not self.is_zero()

    def evaluate(self, point: PointLike) -> int:
        key = tuple(c % self.modulus for c in _coords(point))
        return dict(self.values).get(key, 0)

    def _check(self, other: "StepFunction") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "StepFunction") -> "StepFunction":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        m = lcm(self.modulus, other.modulus)
        total = self.value_map(m)
        for r, v in other.value_map(m).items():
            total[r] = total.get(r, 0) + v
        return StepFunction.from_map(self.dim, m, total)

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.dim, self.modulus, tuple((r, -v) for r, v in self.values))

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def scale(self, factor: int) -> "StepFunction":
        return StepFunction(self.dim, self.modulus, tuple((r, factor * v) for r, v in self.values))

    def __mul__(self, factor: int) -> "StepFunction":
        return self.scale(factor)

    __rmul__ = __mul__

    def translate(self, g: LatticeElement) -> "StepFunction":
        """(g·f)(x) = f(g^{-1}·x)."""
        m = self.modulus
        return StepFunction(
            self.dim, m,
            tuple((tuple((c + s) % m for c, s in zip(r, g.coords)), v) for r, v in self.values),
        )

    def integrate(self) -> Fraction:
        return Fraction(sum(v for _, v in self.values), self.modulus ** self.dim)

    def integrate_abs(self) -> Fraction:
        """∫_X |f| dμ."""
        return Fraction(sum(abs(v) for _, v in self.values), self.modulus ** self.dim)


def integrate_abs(f: StepFunction) -> Fraction:
    return f.integrate_abs()

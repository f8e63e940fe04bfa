"""
cover_cycles.py — Cover Data, Derived F and Torus Fundamental Cycles
======================================================================

Combinatorial stand-in for an amenable cover (U_i)_{i∈I} of a closed
aspherical manifold with fundamental group Γ = Z^n:

    CoverSpec        per cover index i: the subgroup Γ_i and the declared
                     overlap elements {γ : γ·K_i ∩ K_i ≠ ∅}
    derive_F         union of the overlaps, symmetrized, identity added
    torus_cycle      the Freudenthal fundamental cycle of T^n in
                     coinvariants, all labels 0
    check_colouring_cycle   per-tuple colouring witnesses as a report

For the torus the single fundamental domain is K_0 = [0,1]^n, whose
translates meet it exactly for γ ∈ {-1,0,1}^n.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Mapping, Tuple

from src.chain_complex import Chain, LabeledVertex, boundary, coinvariant_normal_form
from src.errors import DimensionMismatchError, UnsupportedDimensionError
from src.group_lattice import FiniteGenSet, LatticeElement, Sublattice
from src.models import ColouringReport, CoverSpecModel
from src.rokhlin_map import ColouredTuple, colouring_satisfied

logger = logging.getLogger(__name__)

MAX_TORUS_DIM = 3  # n! tuples per cycle


@dataclass(frozen=True)
class CoverSpec:
    """Cover index i ↦ (Γ_i, overlap elements of K_i)."""

    dim: int
    subgroups: Tuple[Tuple[Hashable, Sublattice], ...]
    overlaps: Tuple[Tuple[Hashable, FrozenSet[LatticeElement]], ...] = ()

    def __post_init__(self) -> None:
        # stored sorted by index so equal covers compare equal
        subgroups = tuple(sorted(dict(self.subgroups).items()))
        overlaps = tuple(sorted(
            (i, frozenset(elements)) for i, elements in dict(self.overlaps).items()
        ))
        if not subgroups:
            raise ValueError("a cover needs at least one member")
        for i, subgroup in subgroups:
            if subgroup.ambient_dim != self.dim:
                raise DimensionMismatchError(
                    f"cover member {i} lives in Z^{subgroup.ambient_dim}, cover in Z^{self.dim}"
                )
        known = {i for i, _ in subgroups}
        for i, elements in overlaps:
            if i not in known:
                raise ValueError(f"overlaps declared for unknown cover index {i!r}")
            if any(g.dim != self.dim for g in elements):
                raise DimensionMismatchError(f"overlap element of cover member {i} not in Z^{self.dim}")
        object.__setattr__(self, "subgroups", subgroups)
        object.__setattr__(self, "overlaps", overlaps)

    @property
    def indices(self) -> Tuple[Hashable, ...]:
        """Cover indices in ascending order."""
        return tuple(i for i, _ in self.subgroups)

    def subgroup_map(self) -> Dict[Hashable, Sublattice]:
        """i ↦ Γ_i, the form colouring_satisfied and certify_estimate take."""
        return dict(self.subgroups)


def torus_cover(n: int) -> CoverSpec:
    """One member K_0 = [0,1]^n with Γ_0 = Z^n.

    The overlaps are the 3^n elements of {-1,0,1}^n, so derive_F is the
    closed unit box around the identity.
    """
    if n < 1:
        raise UnsupportedDimensionError(f"torus dimension must be positive, got {n}")
    neighbours = frozenset(LatticeElement(p) for p in itertools.product((-1, 0, 1), repeat=n))
    return CoverSpec(n, ((0, Sublattice.standard(n)),), ((0, neighbours),))


def cover_from_model(model: CoverSpecModel) -> CoverSpec:
    """CoverSpec from a validated [cover] table; basis entries are columns."""
    subgroups = []
    overlaps = []
    for member in model.members:
        subgroups.append((member.index, Sublattice(model.dim, tuple(tuple(c) for c in member.basis))))
        overlaps.append((member.index, frozenset(LatticeElement(tuple(g)) for g in member.overlaps)))
    return CoverSpec(model.dim, tuple(subgroups), tuple(overlaps))


def derive_F(spec: CoverSpec) -> FiniteGenSet:
    """F = (∪_i overlaps_i) ∪ its inverses ∪ {0}."""
    elements = frozenset(g for _, overlap in spec.overlaps for g in overlap)
    return FiniteGenSet(elements).symmetrized().with_identity(spec.dim)


def _permutation_sign(perm: Tuple[int, ...]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


def torus_cycle(n: int) -> Chain:
    """Σ_σ sgn(σ)·(0, e_σ1, e_σ1 + e_σ2, …) with every label 0."""
    if not 1 <= n <= MAX_TORUS_DIM:
        raise UnsupportedDimensionError(f"torus_cycle supports 1 <= n <= {MAX_TORUS_DIM}, got {n}")
    terms = {}
    for perm in itertools.permutations(range(n)):
        point = [0] * n
        vertices = [LabeledVertex.of(point, 0)]
        # walk the cube edges in the order given by the permutation
        for axis in perm:
            point[axis] += 1
            vertices.append(LabeledVertex.of(point, 0))
        terms[tuple(vertices)] = _permutation_sign(perm)
    z = coinvariant_normal_form(Chain(terms, arity=n))
    logger.debug(f"torus_cycle(n={n}): {len(z)} tuples")
    return z


def is_coinvariant_cycle(z: Chain) -> bool:
    """∂z vanishes in Z ⊗_{ZΓ} Z[E^{n}]; every 0-chain counts as a cycle."""
    if z.arity is None or z.arity == 0:
        return True
    return not coinvariant_normal_form(boundary(z))


def check_colouring_cycle(
    z: Chain,
    generators: FiniteGenSet,
    subgroups: Mapping[Hashable, Sublattice],
) -> ColouringReport:
    """One entry per tuple of z with its first witness (positions None if absent).

    Never raises on a failed tuple; passed is False when any tuple lacks a
    witness. The empty chain passes.
    """
    tuples = []
    passed = True
    for e in sorted(z, key=repr):
        coloured = colouring_satisfied(e, generators, subgroups)
        if coloured is None:
            passed = False
            tuples.append(ColouredTuple(tuple(e)).to_model())
        else:
            tuples.append(coloured.to_model())
    if not passed:
        logger.warning(f"colouring check failed for {sum(t.positions is None for t in tuples)} tuples")
    return ColouringReport(passed=passed, tuples=tuples)

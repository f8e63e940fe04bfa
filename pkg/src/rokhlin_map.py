"""
rokhlin_map.py — The Rokhlin Chain Map Φ^δ and Its Norm Estimate
==================================================================

For a tuple e = (e_0, …, e_n) of E = Γ × I, e_r = (λ_r, i_r),

    Φ^δ(e)(x, s_0, …, s_n) = χ_{W_{s_0}}(x, e_0) ··· χ_{W_{s_n}}(x, e_n)

Because the family (W_s) restricted to each fiber X × {e_r} is an exact
partition, every x lies in exactly one W_{s_r} per position. phi_delta
therefore walks the residues of X modulo the common tower modulus once,
locates the cell of each position and groups residues by the resulting
S-tuple. The coefficient of that S-tuple is the indicator of its group:

    residues x mod M ──locate──► (s_0(x), …, s_n(x)) ──group──► Σ χ_C ⊗ s

Colouring condition:
    e is coloured if there are k < l with i_k = i_l = i and
    λ_l − λ_k ∈ F ∩ Γ_i. The first such (k, l) in lexicographic order is
    the witness.

Estimate:
    For towers verified (F, δ)-invariant and a chain z whose tuples are all
    coloured, essn Φ^δ(z) ≤ δ·|z|_1. essn_bound_report checks both
    preconditions, computes essn exactly and raises if the bound is beaten.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Set, Tuple

from src.chain_complex import Chain, LabeledVertex, SimplexTuple, l1_norm
from src.errors import ColouringError, EstimateViolationError, TowerVerificationError
from src.group_lattice import FiniteGenSet, LatticeElement, Sublattice, boundary_defect
from src.models import ColouredTupleModel, EssnBoundReport, vertex_to_payload
from src.odometer import CongruenceSet, Residue, StepFunction, all_residues
from src.param_chains import ParamChain, param_essential_norm
from src.rokhlin_tower import EquivariantPartition, verify_tower

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════════════════
# Φ^δ
# ═══════════════════════════════════════════════════════════════════════

def phi_delta(partition: EquivariantPartition, e: Sequence[LabeledVertex]) -> ParamChain:
    """Φ^δ on a single E-tuple."""
    e = tuple(e)
    labels = frozenset(v.label for v in e)
    for label in labels:
        partition.tower(label)
    dim = partition.dim
    modulus = partition.modulus(labels)

    groups: Dict[SimplexTuple, Set[Residue]] = defaultdict(set)
    for x in all_residues(dim, modulus):
        s = tuple(partition.locate(x, v) for v in e)
        groups[s].add(x)

    terms = [
        (s, StepFunction.indicator(CongruenceSet(dim, modulus, frozenset(residues))))
        for s, residues in groups.items()
    ]
    return ParamChain(dim, terms, arity=len(e) - 1)


def phi_delta_chain(partition: EquivariantPartition, c: Chain) -> ParamChain:
    """Linear extension of Φ^δ to integer chains over E."""
    terms: List[Tuple[SimplexTuple, StepFunction]] = []
    for e, coefficient in c.items():
        terms.extend((s, f.scale(coefficient)) for s, f in phi_delta(partition, e).items())
    return ParamChain(partition.dim, terms, arity=c.arity)


# ═══════════════════════════════════════════════════════════════════════
# COLOURING CONDITION
# ═══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class ColouredTuple:
    """An E-tuple with its first colouring witness (k, l, i), if any."""

    simplex: SimplexTuple
    witness: Optional[Tuple[int, int, Hashable]] = None

    @property
    def difference(self) -> Optional[LatticeElement]:
        """λ_k^{-1}·λ_l for the witness positions."""
        if self.witness is None:
            return None
        k, l, _ = self.witness
        return self.simplex[l].group_part - self.simplex[k].group_part

    def to_model(self) -> ColouredTupleModel:
        return ColouredTupleModel(
            simplex=[vertex_to_payload(v) for v in self.simplex],
            positions=None if self.witness is None else [self.witness[0], self.witness[1]],
            index=None if self.witness is None else self.witness[2],
        )


def colouring_satisfied(
    e: Sequence[LabeledVertex],
    generators: FiniteGenSet,
    subgroups: Mapping[Hashable, Sublattice],
) -> Optional[ColouredTuple]:
    e = tuple(e)
    for k in range(len(e)):
        for l in range(k + 1, len(e)):
            i = e[k].label
            if e[l].label != i or i not in subgroups:
                continue
            g = e[l].group_part - e[k].group_part
            if g in generators and subgroups[i].contains(g):
                return ColouredTuple(e, (k, l, i))
    return None


def witness_F(
    z: Chain,
    generators: FiniteGenSet,
    subgroups: Mapping[Hashable, Sublattice],
) -> FiniteGenSet:
    """Symmetrized first-witness differences of z, plus the identity.

    Every tuple of z is coloured for the result, which is contained in the
    symmetrized generators.
    """
    differences = set()
    dim = None
    for e in sorted(z, key=repr):
        coloured = colouring_satisfied(e, generators, subgroups)
        if coloured is None:
            raise ColouringError(f"tuple {e!r} has no colouring witness", offending=e)
        differences.add(coloured.difference)
        dim = e[0].group_part.dim
    if dim is None:
        return generators
    return FiniteGenSet(frozenset(differences)).symmetrized().with_identity(dim)


# ═══════════════════════════════════════════════════════════════════════
# THE ESTIMATE
# ═══════════════════════════════════════════════════════════════════════

def _default_subgroups(partition: EquivariantPartition) -> Dict[Hashable, Sublattice]:
    return {i: partition.tower(i).subgroup for i in partition.indices}


def _witness_mass(
    partition: EquivariantPartition,
    z: Chain,
    generators: FiniteGenSet,
    subgroups: Mapping[Hashable, Sublattice],
) -> Fraction:
    """Σ_e |c_e|·max_j |g_e·T_j \\ T_j| / |T_j| over the first witnesses g_e of z."""
    mass = Fraction(0)
    for e, c in z.items():
        coloured = colouring_satisfied(e, generators, subgroups)
        shapes = partition.tower(coloured.witness[2]).shapes
        mass += abs(c) * max(Fraction(boundary_defect(t, coloured.difference), len(t)) for t in shapes)
    return mass


def certify_estimate(
    partition: EquivariantPartition,
    z: Chain,
    delta: Fraction,
    generators: FiniteGenSet,
    subgroups: Optional[Mapping[Hashable, Sublattice]] = None,
) -> Tuple[EssnBoundReport, ParamChain]:
    """essn_bound_report plus the image Φ^δ(z) it was measured on."""
    delta = Fraction(delta)
    subgroups = dict(subgroups) if subgroups is not None else _default_subgroups(partition)

    for i in partition.indices:
        tower = partition.tower(i)
        report = verify_tower(tower, generators, delta)
        if not report.passed:
            failed = report.failures()[0]
            raise TowerVerificationError(
                f"tower {i} at N={tower.level} failed '{failed.name}': {failed.witness}",
                report=report,
            )

    for e in sorted(z, key=repr):
        if colouring_satisfied(e, generators, subgroups) is None:
            raise ColouringError(f"tuple {e!r} has no colouring witness", offending=e)

    image = phi_delta_chain(partition, z)
    essn = param_essential_norm(image)
    bound = delta * l1_norm(z)
    if essn > bound:
        raise EstimateViolationError(f"essn {essn} exceeds δ·|z|_1 = {bound}", measured=essn, bound=bound)

    if logger.isEnabledFor(logging.DEBUG):
        # witness_mass <= bound whenever the towers are (F, δ)-invariant
        logger.debug(
            f"essn={essn} bound={bound} tuples={len(z)} delta={delta} "
            f"witness_mass={_witness_mass(partition, z, generators, subgroups)}"
        )
    return EssnBoundReport(essn=essn, bound=bound, tuples=len(z), delta=delta), image


def essn_bound_report(
    partition: EquivariantPartition,
    z: Chain,
    delta: Fraction,
    generators: FiniteGenSet,
    subgroups: Optional[Mapping[Hashable, Sublattice]] = None,
) -> EssnBoundReport:
    """Exact essn Φ^δ(z) against δ·|z|_1.

    Raises:
        TowerVerificationError: a tower is not (F, δ)-invariant or not exact.
        ColouringError: a tuple of z has no colouring witness.
        EstimateViolationError: the measured norm exceeds the bound.
    """
    report, _ = certify_estimate(partition, z, delta, generators, subgroups)
    return report

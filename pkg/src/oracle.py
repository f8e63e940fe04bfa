"""
oracle.py — Brute-Force Reference for Φ^δ
===========================================

An implementation of the Rokhlin map that shares nothing with phi_delta
beyond the tower cells themselves. Where phi_delta locates points, the
oracle enumerates cells:

    for each position r, candidates s_r = (λ_r·t, (i_r, j)), t ∈ T_{i_r,j}
    walk the product left to right, intersecting X-factors of W_{s_r}
    drop a branch as soon as the running intersection is empty
    keep χ_{∩} ⊗ (s_0, …, s_n) for every surviving full tuple

support_violations checks the support characterization directly: every
S-tuple in a window around e, scored literally against the E-factor of
W_s, must vanish outside the candidate product.
"""

import itertools
import logging
from typing import Iterable, List, Sequence, Tuple

from src.chain_complex import Chain, LabeledVertex, SimplexTuple
from src.group_lattice import LatticeElement
from src.odometer import CongruenceSet, StepFunction
from src.param_chains import ParamChain
from src.rokhlin_map import phi_delta
from src.rokhlin_tower import EquivariantPartition

logger = logging.getLogger(__name__)


def _candidates(partition: EquivariantPartition, e: LabeledVertex) -> List[LabeledVertex]:
    """Every S-vertex whose E-factor contains e, in a fixed order."""
    return sorted(partition.support(e))


def brute_force_phi(partition: EquivariantPartition, e: Sequence[LabeledVertex]) -> ParamChain:
    """Φ^δ(e) by depth-first search over candidate cells.

    Each branch carries the intersection of the X-factors chosen so far;
    an empty intersection prunes the branch.
    """
    e = tuple(e)
    dim = partition.dim
    terms: List[Tuple[SimplexTuple, StepFunction]] = []

    def extend(prefix: SimplexTuple, region: CongruenceSet) -> None:
        if len(prefix) == len(e):
            terms.append((prefix, StepFunction.indicator(region)))
            return
        for s in _candidates(partition, e[len(prefix)]):
            # e[len(prefix)] already lies in the E-factor of every candidate
            cell, _ = partition.tower_cell(s)
            narrowed = region.intersect(cell)
            if not narrowed.is_empty():
                extend(prefix + (s,), narrowed)

    extend((), CongruenceSet.full(dim))
    return ParamChain(dim, terms, arity=len(e) - 1)


def brute_force_phi_chain(partition: EquivariantPartition, c: Chain) -> ParamChain:
    """Linear extension of brute_force_phi."""
    terms: List[Tuple[SimplexTuple, StepFunction]] = []
    for e, coefficient in c.items():
        terms.extend((s, f.scale(coefficient)) for s, f in brute_force_phi(partition, e).items())
    return ParamChain(partition.dim, terms, arity=c.arity)


def literal_coefficient(
    partition: EquivariantPartition,
    e: Sequence[LabeledVertex],
    s: Sequence[LabeledVertex],
) -> CongruenceSet:
    """{x : (x, e_r) ∈ W_{s_r} for all r}, read off the cell definition."""
    region = CongruenceSet.full(partition.dim)
    for e_r, s_r in zip(e, s):
        cell, e_factor = partition.tower_cell(s_r)
        if e_r not in e_factor:
            return CongruenceSet.empty(partition.dim)
        region = region.intersect(cell)
    return region


def _window(partition: EquivariantPartition, e: LabeledVertex, radius: int) -> Iterable[LabeledVertex]:
    """All S-vertices within sup-distance radius of e, every tower label."""
    dim = partition.dim
    for offset in itertools.product(range(-radius, radius + 1), repeat=dim):
        gamma = e.group_part + LatticeElement(offset)
        for i, j in partition.labels():
            yield LabeledVertex(gamma, (i, j))


def support_violations(
    partition: EquivariantPartition,
    e: Sequence[LabeledVertex],
    radius: int,
) -> List[SimplexTuple]:
    """S-tuples in the window whose literal coefficient disagrees with Φ^δ(e)
    or that lie outside the candidate support yet have a non-null cell."""
    e = tuple(e)
    image = phi_delta(partition, e)
    supports = [partition.support(v) for v in e]
    windows = [list(_window(partition, v, radius)) for v in e]
    bad: List[SimplexTuple] = []
    for s in itertools.product(*windows):
        literal = literal_coefficient(partition, e, s)
        inside = all(s_r in support for s_r, support in zip(s, supports))
        expected = image.coefficient(s)
        if (not inside and not literal.is_empty()) or StepFunction.indicator(literal) != expected:
            bad.append(s)
    if bad:
        logger.warning(f"support check found {len(bad)} disagreeing tuples, first {bad[0]!r}")
    return bad

"""
rokhlin_tower.py — Exact Rokhlin Towers on the Odometer
=========================================================

A Rokhlin tower for a subgroup L ⊂ Z^k is a family of bases (A_j)_{j∈J}
and shapes (T_j)_{j∈J} such that the translates (t·A_j)_{j∈J, t∈T_j}
partition X. On the odometer this is exact (no leftover null set):

    J   = coset representatives of Z^k / L
    T_j = folner_box(L, N) for every j
    A_j = {x ≡ j  mod N·L}, written at scalar modulus N·[Z^k : L]

The family of towers (one per cover index i) induces the Γ-equivariant
partition P^δ of X × Γ × I with cells

    W_(γ,i,j) = (γ·A_{i,j}) × (γ·T_{i,j}^{-1}) × {i}

and the vertex set S = {(γ, (i, j))}. For a fixed point x and a vertex
e = (λ, i) exactly one s satisfies (x, e) ∈ W_s; locate() finds it.

verify_tower never raises on a failed check: it returns a TowerReport with
a witness for every failure.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from src.chain_complex import LabeledVertex
from src.errors import InvalidIndexError, RankDeficientError, TowerVerificationError
from src.group_lattice import (
    FiniteGenSet,
    FolnerSet,
    LatticeElement,
    Sublattice,
    folner_box,
    invariance_defect,
)
from src.models import CheckResult, CongruenceSetModel, TowerDescription, TowerReport
from src.odometer import CongruenceSet, Residue

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════════════════
# SINGLE TOWERS
# ═══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class RokhlinTower:
    """Bases (A_j) and shapes (T_j) over one subgroup.

    The partition property is NOT enforced at construction; verify_tower
    reports it. locate() assumes it.
    """

    subgroup: Sublattice
    bases: Tuple[CongruenceSet, ...]
    shapes: Tuple[FolnerSet, ...]
    level: Optional[int] = None
    coset_reps: Tuple[LatticeElement, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "bases", tuple(self.bases))
        object.__setattr__(self, "shapes", tuple(self.shapes))
        if not self.bases or len(self.bases) != len(self.shapes):
            raise ValueError(
                f"a tower needs matching non-empty bases and shapes, "
                f"got {len(self.bases)} and {len(self.shapes)}"
            )
        dim = self.subgroup.ambient_dim
        if any(a.dim != dim for a in self.bases) or any(t.dim != dim for t in self.shapes):
            raise ValueError(f"tower bases and shapes must live in dimension {dim}")

    @property
    def dim(self) -> int:
        return self.subgroup.ambient_dim

    @property
    def index_set(self) -> range:
        return range(len(self.bases))

    @property
    def modulus(self) -> int:
        return lcm(*(a.modulus for a in self.bases))

    def base(self, j: int) -> CongruenceSet:
        if j not in self.index_set:
            raise InvalidIndexError(f"tower index {j} outside {list(self.index_set)}")
        return self.bases[j]

    def shape(self, j: int) -> FolnerSet:
        if j not in self.index_set:
            raise InvalidIndexError(f"tower index {j} outside {list(self.index_set)}")
        return self.shapes[j]

    def cells(self) -> Iterator[Tuple[int, LatticeElement, CongruenceSet]]:
        """(j, t, t·A_j) for every cell of the tower."""
        for j, (base, shape) in enumerate(zip(self.bases, self.shapes)):
            for t in shape:
                yield j, t, base.translate(t)

    @cached_property
    def _cell_index(self) -> Dict[Residue, Tuple[int, LatticeElement]]:
        m = self.modulus
        index: Dict[Residue, Tuple[int, LatticeElement]] = {}
        for j, t, cell in self.cells():
            for r in cell.refine(m):
                index.setdefault(r, (j, t))
        return index

    def locate(self, point) -> Tuple[int, LatticeElement]:
        """The (j, t) with point ∈ t·A_j."""
        coords = point.coords if isinstance(point, LatticeElement) else tuple(point)
        key = tuple(c % self.modulus for c in coords)
        try:
            return self._cell_index[key]
        except KeyError:
            raise TowerVerificationError(f"point {coords} is not covered by the tower") from None

    def describe(self) -> TowerDescription:
        return TowerDescription(
            dim=self.dim,
            basis=[list(col) for col in self.subgroup.basis],
            level=self.level,
            coset_reps=[list(r.coords) for r in self.coset_reps],
            modulus=self.modulus,
            shape_size=[len(t) for t in self.shapes],
            bases=[CongruenceSetModel.from_domain(a) for a in self.bases],
        )


def build_tower(subgroup: Sublattice, n: int) -> RokhlinTower:
    """Exact tower over a full-rank sublattice with box shapes of side n."""
    if n < 1:
        raise ValueError(f"tower level must be positive, got {n}")
    if not subgroup.is_full_rank():
        raise RankDeficientError(
            f"subgroup of rank {subgroup.rank} < {subgroup.ambient_dim} does not tile Z^k"
        )
    k = subgroup.ambient_dim
    d = subgroup.index()
    reps = subgroup.coset_representatives()
    shape = folner_box(subgroup, n)
    modulus = n * d

    # N·M·a mod (N·d) is d-periodic in each coordinate of a
    grid = np.indices((d,) * k).reshape(k, -1).astype(object)
    offsets = (subgroup.matrix * n).dot(grid)
    bases = []
    for rep in reps:
        shifted = offsets + np.array(rep.coords, dtype=object).reshape(k, 1)
        residues = frozenset(
            tuple(int(v) % modulus for v in shifted[:, col]) for col in range(shifted.shape[1])
        )
        bases.append(CongruenceSet(k, modulus, residues))

    tower = RokhlinTower(subgroup, tuple(bases), (shape,) * len(bases), level=n, coset_reps=reps)
    logger.debug(
        f"[N={n}] built tower: |J|={len(reps)} |T|={len(shape)} modulus={tower.modulus}"
    )
    return tower


# ═══════════════════════════════════════════════════════════════════════
# VERIFICATION
# ═══════════════════════════════════════════════════════════════════════

def _check_partition(tower: RokhlinTower) -> Tuple[CheckResult, CheckResult]:
    m = tower.modulus
    owner: Dict[Residue, Tuple[int, LatticeElement]] = {}
    overlap: Optional[str] = None
    total = Fraction(0)
    for j, t, cell in tower.cells():
        total += cell.measure()
        for r in cell.refine(m):
            previous = owner.setdefault(r, (j, t))
            if previous != (j, t) and overlap is None:
                overlap = (
                    f"cells (j={previous[0]}, t={previous[1]!r}) and (j={j}, t={t!r}) "
                    f"share residue {r} mod {m}"
                )
    disjoint = CheckResult(name="disjoint", passed=overlap is None, witness=overlap)

    covers_all = len(owner) == m ** tower.dim and total == 1
    witness = None
    if not covers_all:
        missing = next(
            (r for r in np.ndindex(*(m,) * tower.dim) if tuple(r) not in owner), None
        )
        witness = f"total measure {total}" + (
            f", residue {tuple(missing)} mod {m} uncovered" if missing is not None else ""
        )
    return disjoint, CheckResult(name="covers", passed=covers_all, witness=witness)


def verify_tower(tower: RokhlinTower, generators: FiniteGenSet, delta: Fraction) -> TowerReport:
    """Check partition, invariance, identity, non-null bases and the measure identity."""
    delta = Fraction(delta)
    checks: List[CheckResult] = list(_check_partition(tower))

    local = generators.restrict(tower.subgroup)
    defects = [invariance_defect(shape, local) for shape in tower.shapes]
    bad = next(((j, d) for j, d in enumerate(defects) if d > delta), None)
    checks.append(CheckResult(
        name="invariance",
        passed=bad is None,
        witness=None if bad is None else f"j={bad[0]}: defect {bad[1]} > {delta}",
    ))

    zero = LatticeElement.zero(tower.dim)
    no_identity = [j for j, shape in enumerate(tower.shapes) if zero not in shape]
    checks.append(CheckResult(
        name="identity",
        passed=not no_identity,
        witness=None if not no_identity else f"T_j without identity for j in {no_identity}",
    ))

    outside = next(
        ((j, t) for j, shape in enumerate(tower.shapes) for t in shape
         if not tower.subgroup.contains(t)),
        None,
    )
    checks.append(CheckResult(
        name="shapes_in_subgroup",
        passed=outside is None,
        witness=None if outside is None else f"t={outside[1]!r} in T_{outside[0]} not in subgroup",
    ))

    null = [j for j, base in enumerate(tower.bases) if base.is_empty()]
    checks.append(CheckResult(
        name="non_null",
        passed=not null,
        witness=None if not null else f"empty bases A_j for j in {null}",
    ))

    mismatch = None
    for j, (base, shape) in enumerate(zip(tower.bases, tower.shapes)):
        swept = CongruenceSet.empty(tower.dim)
        for t in shape:
            swept = swept.union(base.translate(t))
        if base.measure() != swept.measure() / len(shape):
            mismatch = f"j={j}: μ(A)={base.measure()} but μ(T·A)/|T|={swept.measure() / len(shape)}"
            break
    checks.append(CheckResult(name="measure_identity", passed=mismatch is None, witness=mismatch))

    report = TowerReport(
        passed=all(c.passed for c in checks),
        delta=delta,
        max_defect=max(defects),
        checks=checks,
    )
    if not report.passed:
        failed = ", ".join(f"{c.name}: {c.witness}" for c in report.failures())
        logger.warning(f"[N={tower.level}] tower verification failed | {failed}")
    return report


# ═══════════════════════════════════════════════════════════════════════
# THE EQUIVARIANT PARTITION P^δ
# ═══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class EquivariantPartition:
    """One tower per cover index i; vertices of S are (γ, (i, j))."""

    towers: Tuple[Tuple[int, RokhlinTower], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted(dict(self.towers).items()))
        if not pairs:
            raise ValueError("a partition needs at least one tower")
        dims = {t.dim for _, t in pairs}
        if len(dims) > 1:
            raise ValueError(f"towers live in different dimensions {sorted(dims)}")
        object.__setattr__(self, "towers", pairs)

    @classmethod
    def of(cls, towers: Mapping[int, RokhlinTower]) -> "EquivariantPartition":
        return cls(tuple(towers.items()))

    @property
    def dim(self) -> int:
        return self.towers[0][1].dim

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.towers)

    @cached_property
    def _by_index(self) -> Dict[int, RokhlinTower]:
        return dict(self.towers)

    def tower(self, i: int) -> RokhlinTower:
        try:
            return self._by_index[i]
        except KeyError:
            raise InvalidIndexError(f"cover index {i!r} not in {list(self.indices)}") from None

    def labels(self) -> Tuple[Tuple[int, int], ...]:
        """All tower labels (i, j), sorted."""
        return tuple((i, j) for i, t in self.towers for j in t.index_set)

    def modulus(self, indices: Optional[FrozenSet[int]] = None) -> int:
        chosen = self.indices if indices is None else sorted(indices)
        return lcm(*(self.tower(i).modulus for i in chosen))

    def _split(self, s: LabeledVertex) -> Tuple[RokhlinTower, int]:
        if not (isinstance(s.label, tuple) and len(s.label) == 2):
            raise InvalidIndexError(f"vertex {s!r} does not carry a tower label (i, j)")
        i, j = s.label
        tower = self.tower(i)
        if j not in tower.index_set:
            raise InvalidIndexError(f"tower index {j} outside {list(tower.index_set)} for i={i}")
        return tower, j

    def tower_cell(self, s: LabeledVertex) -> Tuple[CongruenceSet, FrozenSet[LabeledVertex]]:
        """W_s = (γ·A_{i,j}) × (γ·T_{i,j}^{-1}) × {i}, as its X- and E-factor."""
        tower, j = self._split(s)
        gamma, (i, _) = s.group_part, s.label
        x_factor = tower.base(j).translate(gamma)
        e_factor = frozenset(LabeledVertex(gamma - t, i) for t in tower.shape(j))
        return x_factor, e_factor

    def locate(self, point, e: LabeledVertex) -> LabeledVertex:
        """The unique s with (point, e) ∈ W_s."""
        tower = self.tower(e.label)
        coords = point.coords if isinstance(point, LatticeElement) else tuple(point)
        shifted = tuple(c - l for c, l in zip(coords, e.group_part.coords))
        j, t = tower.locate(shifted)
        return LabeledVertex(e.group_part + t, (e.label, j))

    def support(self, e: LabeledVertex) -> FrozenSet[LabeledVertex]:
        """{s : W_s meets X × {e}} = {(λ·t, (i, j)) : j ∈ J_i, t ∈ T_{i,j}}."""
        tower = self.tower(e.label)
        return frozenset(
            LabeledVertex(e.group_part + t, (e.label, j))
            for j in tower.index_set for t in tower.shape(j)
        )


def tower_cell(partition: EquivariantPartition, s: LabeledVertex) -> Tuple[CongruenceSet, FrozenSet[LabeledVertex]]:
    return partition.tower_cell(s)

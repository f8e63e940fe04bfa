from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.chain_complex import LabeledVertex
from src.errors import InvalidIndexError, RankDeficientError, TowerVerificationError
from src.group_lattice import FiniteGenSet, FolnerSet, LatticeElement, Sublattice, invariance_defect
from src.odometer import CongruenceSet
from src.rokhlin_tower import EquivariantPartition, RokhlinTower, build_tower, tower_cell, verify_tower
from src.selftest import SUBLATTICES, unit_box_generators
from tests.strategies import elements, vertices


def mod(m, *residues):
    return CongruenceSet.congruence(m, *[(r,) for r in residues])


def line_points(*values):
    return [LatticeElement.of(x) for x in values]


class TestBuildTower:
    def test_full_lattice(self, line_tower):
        assert line_tower.bases == (mod(4, 0),)
        assert list(line_tower.shapes[0]) == line_points(0, 1, 2, 3)
        cells = sorted(sorted(cell.residues) for _, _, cell in line_tower.cells())
        assert cells == [[(r,)] for r in range(4)]

    def test_index_two_sublattice(self):
        tower = build_tower(Sublattice(1, ((2,),)), 2)
        assert tower.bases == (mod(4, 0), mod(4, 1))
        assert list(tower.shapes[0]) == line_points(0, 2)
        assert tower.coset_reps == tuple(line_points(0, 1))

    def test_trivial_level(self):
        tower = build_tower(Sublattice(2, ((2, 0), (0, 1))), 1)
        assert all(len(shape) == 1 for shape in tower.shapes)
        assert verify_tower(tower, FiniteGenSet.of((0, 0)), Fraction(0)).passed

    def test_rank_deficient(self):
        with pytest.raises(RankDeficientError):
            build_tower(Sublattice(2, ((1, 0),)), 3)

    def test_level_must_be_positive(self):
        with pytest.raises(ValueError):
            build_tower(Sublattice.standard(1), 0)

    def test_describe(self):
        description = build_tower(Sublattice(2, ((1, 1), (1, -1))), 3).describe()
        assert description.modulus == 6
        assert description.coset_reps == [[0, 0], [0, 1]]
        assert description.shape_size == [9, 9]

    def test_locate(self, line_tower):
        assert line_tower.locate((6,)) == (0, LatticeElement.of(2))
        assert line_tower.locate(LatticeElement.of(-1)) == (0, LatticeElement.of(3))


class TestVerifyTower:
    def test_passes_at_half(self, line_tower):
        report = verify_tower(line_tower, FiniteGenSet.of((1,)), Fraction(1, 2))
        assert report.passed
        assert report.max_defect == Fraction(1, 2)
        assert {c.name for c in report.checks} == {
            "disjoint", "covers", "invariance", "identity", "shapes_in_subgroup", "non_null", "measure_identity",
        }

    def test_invariance_fails_at_quarter(self, line_tower):
        report = verify_tower(line_tower, FiniteGenSet.of((1,)), Fraction(1, 4))
        assert not report.passed
        [failure] = report.failures()
        assert failure.name == "invariance"
        assert "1/2 > 1/4" in failure.witness

    def test_overlapping_bases(self):
        good = build_tower(Sublattice(1, ((2,),)), 2)
        bad = RokhlinTower(good.subgroup, (good.bases[0], good.bases[0]), good.shapes, level=2)
        report = verify_tower(bad, FiniteGenSet.of((2,)), Fraction(1))
        failed = {c.name for c in report.failures()}
        assert {"disjoint", "covers"} <= failed
        with pytest.raises(TowerVerificationError):
            bad.locate((1,))

    def test_shape_outside_subgroup(self):
        good = build_tower(Sublattice(1, ((2,),)), 2)
        odd_shape = FolnerSet(frozenset(line_points(0, 1)))
        bad = RokhlinTower(good.subgroup, good.bases, (odd_shape, odd_shape))
        failed = {c.name for c in verify_tower(bad, FiniteGenSet.of((2,)), Fraction(1)).failures()}
        assert "shapes_in_subgroup" in failed

    @pytest.mark.parametrize("subgroup", SUBLATTICES)
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_exact_towers(self, subgroup, n):
        tower = build_tower(subgroup, n)
        generators = unit_box_generators(subgroup)
        delta = max(invariance_defect(t, generators) for t in tower.shapes)
        report = verify_tower(tower, generators, delta)
        assert report.passed, report.failures()
        for base, shape in zip(tower.bases, tower.shapes):
            assert base.measure() * len(shape) * len(tower.bases) == 1


class TestEquivariantPartition:
    def test_tower_cell_at_identity(self, line_partition):
        x_factor, e_factor = tower_cell(line_partition, LabeledVertex.of((0,), (0, 0)))
        assert x_factor == mod(4, 0)
        assert e_factor == {LabeledVertex.of((-t,), 0) for t in range(4)}

    def test_tower_cell_translated(self, line_partition):
        x_factor, e_factor = tower_cell(line_partition, LabeledVertex.of((5,), (0, 0)))
        assert x_factor == mod(4, 1)
        assert e_factor == {LabeledVertex.of((g,), 0) for g in (5, 4, 3, 2)}

    def test_invalid_indices(self, line_partition):
        with pytest.raises(InvalidIndexError):
            tower_cell(line_partition, LabeledVertex.of((0,), (0, 1)))
        with pytest.raises(InvalidIndexError):
            tower_cell(line_partition, LabeledVertex.of((0,), (7, 0)))
        with pytest.raises(InvalidIndexError):
            line_partition.locate((0,), LabeledVertex.of((0,), 3))

    def test_locate(self, line_partition):
        s = line_partition.locate((6,), LabeledVertex.of((1,), 0))
        assert s == LabeledVertex.of((2,), (0, 0))
        x_factor, e_factor = line_partition.tower_cell(s)
        assert (6,) in x_factor
        assert LabeledVertex.of((1,), 0) in e_factor

    def test_mismatched_dimensions(self):
        with pytest.raises(ValueError):
            EquivariantPartition.of({
                0: build_tower(Sublattice.standard(1), 2),
                1: build_tower(Sublattice.standard(2), 2),
            })

    @given(data=st.data())
    @settings(max_examples=100, deadline=None)
    def test_fibers_are_partitions(self, partitions, data):
        dim, n = data.draw(st.sampled_from(sorted(partitions)))
        partition = partitions[(dim, n)]
        e = data.draw(vertices(dim, partition.indices))
        cells = [partition.tower_cell(s)[0] for s in sorted(partition.support(e))]
        assert sum((c.measure() for c in cells), Fraction(0)) == 1
        union = CongruenceSet.empty(dim)
        for cell in cells:
            assert union.intersect(cell).is_empty()
            union = union.union(cell)
        assert union == CongruenceSet.full(dim)

    @given(data=st.data())
    @settings(max_examples=100, deadline=None)
    def test_tower_cell_is_equivariant(self, partitions, data):
        dim, n = data.draw(st.sampled_from(sorted(partitions)))
        partition = partitions[(dim, n)]
        i, j = data.draw(st.sampled_from(partition.labels()))
        s = LabeledVertex(data.draw(elements(dim)), (i, j))
        gamma = data.draw(elements(dim))
        x, e = partition.tower_cell(s)
        x_moved, e_moved = partition.tower_cell(s.translate(gamma))
        assert x_moved == x.translate(gamma)
        assert e_moved == frozenset(v.translate(gamma) for v in e)

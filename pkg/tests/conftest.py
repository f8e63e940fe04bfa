"""Shared fixtures."""

import pytest

from src.group_lattice import FiniteGenSet, Sublattice
from src.rokhlin_tower import EquivariantPartition, build_tower
from src.selftest import mixed_partition, unit_box_generators


@pytest.fixture
def line_tower():
    """Tower over Z with N = 4: A = {x ≡ 0 mod 4}, T = {0, 1, 2, 3}."""
    return build_tower(Sublattice.standard(1), 4)


@pytest.fixture
def line_partition(line_tower):
    return EquivariantPartition.of({0: line_tower})


@pytest.fixture(scope="session")
def partitions():
    """Mixed partitions (|J| = 1 and |J| = 2) keyed by (dim, N)."""
    return {(dim, n): mixed_partition(dim, n) for dim in (1, 2) for n in (2, 4)}


@pytest.fixture(scope="session")
def unit_generators():
    return {
        1: FiniteGenSet.of((-1,), (0,), (1,)),
        2: unit_box_generators(Sublattice.standard(2)),
    }

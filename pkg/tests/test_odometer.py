from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import DimensionMismatchError
from src.group_lattice import LatticeElement, compose
from src.odometer import CongruenceSet, StepFunction, integrate_abs, intersect, measure, translate
from tests.strategies import congruence_sets, elements, step_functions


def mod(m, *residues):
    return CongruenceSet.congruence(m, *[(r,) for r in residues])


class TestCongruenceSet:
    def test_translate(self):
        a = mod(4, 0)
        assert translate(LatticeElement.of(1), a) == mod(4, 1)
        assert translate(LatticeElement.of(4), a) == a
        assert translate(LatticeElement.of(0), a) == a

    def test_intersect_crt(self):
        assert intersect(mod(2, 0), mod(3, 0)) == mod(6, 0)

    def test_intersect_idempotent_and_disjoint(self):
        a = mod(4, 1, 3)
        assert intersect(a, a) == a
        assert intersect(mod(2, 0), mod(2, 1)).is_empty()

    def test_measure(self):
        assert measure(mod(4, 0)) == Fraction(1, 4)
        assert measure(CongruenceSet.full(2)) == 1
        assert measure(CongruenceSet.empty(2)) == 0

    def test_canonical_modulus(self):
        a = mod(4, 0, 2)
        assert a.modulus == 2
        assert a == mod(2, 0)
        assert mod(6, 0, 1, 2, 3, 4, 5) == CongruenceSet.full(1)

    def test_canonical_modulus_drops_each_prime(self):
        assert mod(12, 1, 7).modulus == 6
        assert mod(12, 1, 4, 7, 10).modulus == 3
        assert mod(30, 0).modulus == 30

    def test_contains(self):
        a = CongruenceSet.congruence(4, (1, 2))
        assert (5, -2) in a
        assert LatticeElement.of(1, 3) not in a

    def test_boolean_algebra(self):
        a, b = mod(2, 0), mod(3, 0)
        assert a.union(b).measure() == Fraction(2, 3)
        assert a.difference(b) == mod(6, 2, 4)
        assert a.complement() == mod(2, 1)

    def test_rejects_out_of_range_residue(self):
        with pytest.raises(ValueError):
            CongruenceSet(1, 4, frozenset({(4,)}))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            mod(2, 0).intersect(CongruenceSet.full(2))

    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(congruence_sets(d), elements(d), elements(d))))
    @settings(max_examples=200, deadline=None)
    def test_action_preserves_measure_and_composes(self, case):
        a, g, h = case
        assert a.translate(g).measure() == a.measure()
        assert a.translate(h).translate(g) == a.translate(compose(g, h))

    @given(st.integers(2, 6), st.integers(-20, 20).filter(lambda g: g != 0), st.integers(0, 5))
    def test_translation_is_free(self, m, g, r):
        single = CongruenceSet.congruence(m, (r % m,))
        moved = single.translate(LatticeElement.of(g))
        if g % m:
            assert moved.intersect(single).is_empty()
        else:
            assert moved == single

    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(congruence_sets(d), congruence_sets(d))))
    def test_inclusion_exclusion(self, pair):
        a, b = pair
        assert a.union(b).measure() + a.intersect(b).measure() == a.measure() + b.measure()


class TestStepFunction:
    def test_integrate_abs_single_term(self):
        assert integrate_abs(StepFunction.indicator(mod(4, 0), 3)) == Fraction(3, 4)

    def test_cancellation(self):
        chi = StepFunction.indicator(mod(4, 0))
        difference = chi - chi
        assert difference.is_zero()
        assert integrate_abs(difference) == 0

    def test_two_terms(self):
        f = StepFunction.indicator(mod(2, 0)) + StepFunction.indicator(mod(2, 1), 2)
        assert integrate_abs(f) == Fraction(3, 2)
        assert f.integrate() == Fraction(3, 2)

    def test_indicators_of_a_partition_sum_to_one(self):
        total = StepFunction.from_terms(1, [(mod(4, r), 1) for r in range(4)])
        assert total == StepFunction.constant(1, 1)
        assert total.modulus == 1

    def test_terms_are_disjoint(self):
        f = StepFunction.from_map(1, 4, {(0,): 2, (1,): 2, (2,): -1})
        assert f.terms == ((mod(4, 2), -1), (mod(4, 0, 1), 2))

    def test_evaluate_and_translate(self):
        f = StepFunction.indicator(mod(4, 1), 5)
        assert f.evaluate((9,)) == 5
        assert f.translate(LatticeElement.of(2)).evaluate((3,)) == 5

    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(step_functions(d), step_functions(d))))
    @settings(max_examples=200, deadline=None)
    def test_triangle_inequality(self, pair):
        f, g = pair
        assert (f + g).integrate_abs() <= f.integrate_abs() + g.integrate_abs()

    @given(st.integers(1, 2).flatmap(step_functions))
    def test_canonical_form_is_idempotent(self, f):
        assert StepFunction(f.dim, f.modulus, f.values) == f
        assert f + StepFunction.zero(f.dim) == f
        assert f.scale(-1) == -f

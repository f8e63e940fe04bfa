import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.chain_complex import (
    Chain,
    LabeledVertex,
    augment,
    boundary,
    coinvariant_normal_form,
    essential_norm,
    is_degenerate,
    l1_norm,
)
from src.errors import ArityError
from tests.strategies import chains, elements

a, b, c = (LabeledVertex.of((x,), 0) for x in (0, 1, 2))


def line_vertex(x, label=0):
    return LabeledVertex.of((x,), label)


class TestBoundary:
    def test_edge(self):
        assert boundary(Chain.single((a, b))) == Chain({(b,): 1, (a,): -1})

    def test_triangle(self):
        expected = Chain({(b, c): 1, (a, c): -1, (a, b): 1})
        assert boundary(Chain.single((a, b, c))) == expected

    def test_arity_zero(self):
        with pytest.raises(ArityError):
            boundary(Chain.single((a,)))

    def test_zero_chain(self):
        assert not boundary(Chain.zero())

    @given(st.integers(1, 2).flatmap(lambda d: st.integers(2, 4).flatmap(lambda n: chains(d, n))))
    @settings(max_examples=200, deadline=None)
    def test_boundary_squares_to_zero(self, chain):
        assert not boundary(boundary(chain))

    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(chains(d, 2), elements(d))))
    def test_boundary_is_equivariant(self, case):
        chain, gamma = case
        assert boundary(chain.translate(gamma)) == boundary(chain).translate(gamma)


class TestAugmentation:
    def test_coefficient_sum(self):
        assert augment(Chain({(a,): 3, (b,): -1})) == 2

    def test_empty(self):
        assert augment(Chain.zero()) == 0
        assert augment(Chain.zero(0)) == 0

    def test_wrong_arity(self):
        with pytest.raises(ArityError):
            augment(Chain.single((a, b)))

    @given(chains(1, 1))
    def test_augmented_complex(self, chain):
        assert augment(boundary(chain)) == 0


class TestNorms:
    def test_degenerate_term(self):
        chain = Chain({(a, b): 2, (a, a): -3})
        assert l1_norm(chain) == 5
        assert essential_norm(chain) == 2

    def test_zero(self):
        assert (l1_norm(Chain.zero()), essential_norm(Chain.zero())) == (0, 0)

    def test_is_degenerate(self):
        assert is_degenerate((a, b, a))
        assert not is_degenerate((a, b, c))

    @given(st.integers(0, 3).flatmap(lambda n: chains(2, n)))
    def test_essn_below_l1(self, chain):
        assert essential_norm(chain) <= l1_norm(chain)


class TestChainArithmetic:
    def test_mixed_arities_rejected(self):
        with pytest.raises(ArityError):
            Chain({(a,): 1, (a, b): 1})
        with pytest.raises(ArityError):
            Chain.single((a,)) + Chain.single((a, b))

    def test_cancellation_keeps_arity(self):
        chain = Chain.single((a, b)) - Chain.single((a, b))
        assert not chain
        assert chain.arity == 1

    def test_scalar(self):
        assert (3 * Chain.single((a, b))).coefficient((a, b)) == 3


class TestCoinvariantNormalForm:
    def test_translation(self):
        chain = Chain.single((line_vertex(3, 0), line_vertex(5, 1)))
        assert coinvariant_normal_form(chain) == Chain.single((line_vertex(0, 0), line_vertex(2, 1)))

    def test_torus_boundary_vanishes(self):
        z = Chain.single((line_vertex(0), line_vertex(1)))
        assert not coinvariant_normal_form(boundary(z))

    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(chains(d, 2), elements(d))))
    @settings(max_examples=200, deadline=None)
    def test_idempotent_and_invariant(self, case):
        chain, gamma = case
        normal = coinvariant_normal_form(chain)
        assert coinvariant_normal_form(normal) == normal
        assert coinvariant_normal_form(chain.translate(gamma)) == normal

    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(chains(d, 2), elements(d))))
    def test_boundary_descends(self, case):
        chain, gamma = case
        shifted = chain.translate(gamma)
        assert coinvariant_normal_form(boundary(shifted)) == coinvariant_normal_form(boundary(chain))

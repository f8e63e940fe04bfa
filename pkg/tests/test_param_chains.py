from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.chain_complex import Chain, LabeledVertex
from src.errors import ArityError, DimensionMismatchError
from src.odometer import CongruenceSet, StepFunction
from src.param_chains import (
    ParamChain,
    TensorChain,
    apply_chain_map,
    augment_tilde,
    boundary_literal,
    param_boundary,
    param_essential_norm,
    param_l1_norm,
    to_model,
    translate,
    xi,
    zeta,
)
from tests.strategies import elements, param_chains

s0, s1, s2 = (LabeledVertex.of((x,), (0, 0)) for x in (0, 1, 2))
CHI_0 = StepFunction.indicator(CongruenceSet.congruence(4, (0,)))
CHI_1 = StepFunction.indicator(CongruenceSet.congruence(4, (1,)))


def any_param_chain(arities=(0, 1, 2)):
    return st.sampled_from((1, 2)).flatmap(
        lambda d: st.sampled_from(arities).flatmap(lambda n: param_chains(d, n))
    )


class TestParamChain:
    def test_merges_coefficients(self):
        c = ParamChain(1, [((s0, s1), CHI_0), ((s0, s1), CHI_1)])
        assert c.coefficient((s0, s1)) == CHI_0 + CHI_1
        assert len(c) == 1

    def test_cancellation(self):
        c = ParamChain(1, [((s0, s1), CHI_0), ((s0, s1), -CHI_0)], arity=1)
        assert not c
        assert c.arity == 1

    def test_evaluate(self):
        c = ParamChain.elementary(CHI_1 * 3, (s0, s1))
        assert c.evaluate((5,), (s0, s1)) == 3
        assert c.evaluate((4,), (s0, s1)) == 0
        assert c.evaluate((5,), (s1, s0)) == 0

    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            ParamChain(2, [((s0,), CHI_0)])

    def test_mixed_arities(self):
        with pytest.raises(ArityError):
            ParamChain(1, [((s0,), CHI_0), ((s0, s1), CHI_0)])


class TestBoundary:
    def test_edge(self):
        c = ParamChain.elementary(CHI_0, (s0, s1))
        assert param_boundary(c) == ParamChain(1, [((s1,), CHI_0), ((s0,), -CHI_0)])

    def test_arity_zero(self):
        with pytest.raises(ArityError):
            param_boundary(ParamChain.elementary(CHI_0, (s0,)))

    def test_literal_formula(self):
        c = ParamChain(1, [((s0, s1, s2), CHI_0), ((s0, s2, s2), CHI_1)])
        db = param_boundary(c)
        for face in [(s1, s2), (s0, s2), (s0, s1), (s2, s2)]:
            assert boundary_literal(c, face) == db.coefficient(face)

    @given(any_param_chain(arities=(2, 3)))
    @settings(max_examples=200, deadline=None)
    def test_squares_to_zero(self, c):
        assert not param_boundary(param_boundary(c))

    @given(any_param_chain(arities=(1, 2)))
    @settings(max_examples=100, deadline=None)
    def test_pushforward_matches_literal_sum(self, c):
        db = param_boundary(c)
        for face in db:
            assert boundary_literal(c, face) == db.coefficient(face)

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_equivariant(self, data):
        c = data.draw(any_param_chain(arities=(1, 2)))
        gamma = data.draw(elements(c.dim))
        assert param_boundary(translate(c, gamma)) == translate(param_boundary(c), gamma)


class TestAugmentation:
    def test_two_terms(self):
        c = ParamChain(1, [((s0,), CHI_0), ((s1,), CHI_1)])
        assert augment_tilde(c) == CHI_0 + CHI_1

    def test_empty(self):
        assert augment_tilde(ParamChain.zero(1)).is_zero()

    def test_wrong_arity(self):
        with pytest.raises(ArityError):
            augment_tilde(ParamChain.elementary(CHI_0, (s0, s1)))


class TestXiZeta:
    def test_xi_of_elementary_tensor(self):
        c = xi(TensorChain.elementary(CHI_1, Chain.single((s0, s1))))
        assert c.evaluate((1,), (s0, s1)) == 1
        assert c.evaluate((1,), (s1, s0)) == 0
        assert c.evaluate((2,), (s0, s1)) == 0

    def test_xi_of_zero(self):
        assert not xi(TensorChain(1))

    def test_tensor_relations(self):
        split = TensorChain(1, ((CHI_0, Chain.single((s0, s1))), (CHI_1, Chain.single((s0, s1)))))
        joined = TensorChain.elementary(CHI_0 + CHI_1, Chain.single((s0, s1)))
        assert split == joined

    @given(any_param_chain())
    @settings(max_examples=200, deadline=None)
    def test_round_trips(self, c):
        assert xi(zeta(c)) == c
        tensor = zeta(c)
        assert zeta(xi(tensor)) == tensor
        assert param_essential_norm(xi(tensor)) == param_essential_norm(c)

    @given(any_param_chain(arities=(1, 2)))
    @settings(max_examples=200, deadline=None)
    def test_commute_with_boundary(self, c):
        assert xi(zeta(c).boundary()) == param_boundary(c)

    @given(any_param_chain(arities=(0,)))
    def test_compatible_with_augmentation(self, c):
        assert augment_tilde(c) == zeta(c).augment()


class TestNorms:
    def test_degenerate_excluded(self):
        c = ParamChain.elementary(CHI_0, (s0, s0))
        assert param_essential_norm(c) == 0
        assert param_l1_norm(c) == Fraction(1, 4)

    def test_single_integral(self):
        assert param_essential_norm(ParamChain.elementary(CHI_0, (s0, s1))) == Fraction(1, 4)

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_triangle_inequality_and_invariance(self, data):
        c = data.draw(any_param_chain(arities=(1,)))
        d = data.draw(param_chains(c.dim, 1))
        gamma = data.draw(elements(c.dim))
        assert param_essential_norm(c + d) <= param_essential_norm(c) + param_essential_norm(d)
        assert param_essential_norm(translate(c, gamma)) == param_essential_norm(c)


class TestChainMaps:
    def test_identity_map(self):
        c = ParamChain(1, [((s0, s1), CHI_0), ((s1, s2), CHI_1)])
        assert apply_chain_map(c, lambda chain: chain) == c

    def test_linear_map_merges_images(self):
        c = ParamChain(1, [((s0, s1), CHI_0), ((s1, s2), CHI_1)])
        collapse = lambda chain: Chain({(s0, s1): sum(chain.terms.values())}, arity=1)
        assert apply_chain_map(c, collapse) == ParamChain.elementary(CHI_0 + CHI_1, (s0, s1))

    def test_to_model(self):
        model = to_model(ParamChain.elementary(CHI_0, (s0, s1)))
        assert model.arity == 1
        assert model.essential_norm == Fraction(1, 4)
        assert model.terms[0].simplex == [[0, [0, 0]], [1, [0, 0]]]

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from src.chain_complex import Chain, LabeledVertex
from src.cover_cycles import torus_cycle
from src.models import (
    ChainModel,
    CongruenceSetModel,
    EssnBoundReport,
    PipelineConfig,
    StepFunctionModel,
    dump_json,
    format_rational,
    parse_rational,
)
from src.odometer import CongruenceSet, StepFunction
from tests.strategies import step_functions


class TestRationals:
    @pytest.mark.parametrize("value, text", [(Fraction(1, 2), "1/2"), (Fraction(3), "3"), (Fraction(-5, 4), "-5/4")])
    def test_format(self, value, text):
        assert format_rational(value) == text
        assert parse_rational(text) == value

    @pytest.mark.parametrize("value", [0.5, True, None])
    def test_non_exact_rejected(self, value):
        with pytest.raises(ValueError):
            parse_rational(value)

    def test_serialized_as_string(self):
        report = EssnBoundReport(essn=Fraction(1, 4), bound="1/2", tuples=1, delta=Fraction(1, 2))
        assert json.loads(dump_json(report)) == {"essn": "1/4", "bound": "1/2", "tuples": 1, "delta": "1/2"}

    def test_float_field_rejected(self):
        with pytest.raises(ValidationError):
            EssnBoundReport(essn=0.25, bound="1/2", tuples=1, delta="1/2")


class TestChainModel:
    def test_uses_tuple_key(self):
        data = json.loads(dump_json(ChainModel.from_domain(torus_cycle(1))))
        assert data == {"arity": 1, "terms": [{"tuple": [[0, 0], [1, 0]], "coeff": 1}]}

    def test_tower_labels_survive(self):
        c = Chain.single((LabeledVertex.of((2, -1), (1, 0)), LabeledVertex.of((0, 0), (0, 0))), -3)
        model = ChainModel.model_validate(json.loads(dump_json(ChainModel.from_domain(c))))
        assert model.to_domain() == c

    def test_vertex_needs_coordinates(self):
        with pytest.raises(ValueError):
            ChainModel.model_validate({"arity": 0, "terms": [{"tuple": [[0]], "coeff": 1}]}).to_domain()


class TestMeasurePayloads:
    def test_congruence_set(self):
        subset = CongruenceSet.congruence(4, (1,), (3,))
        model = CongruenceSetModel.from_domain(subset)
        assert model.m == 2
        assert model.to_domain() == subset

    def test_step_function(self):
        f = StepFunction.indicator(CongruenceSet.congruence(4, (0,))) * 3
        model = StepFunctionModel.from_domain(f)
        assert model.integral_abs == Fraction(3, 4)
        assert model.to_domain() == f

    def test_step_function_with_coarser_value_classes(self):
        even = StepFunction.indicator(CongruenceSet.congruence(2, (0,)))
        f = even + StepFunction.indicator(CongruenceSet.congruence(4, (1,)), 2)
        model = StepFunctionModel.from_domain(f)
        assert model.m == 4
        assert sorted(len(t.residues) for t in model.terms) == [1, 2]
        assert model.to_domain() == f
        assert model.to_domain().integrate_abs() == model.integral_abs == 1

    @given(st.sampled_from((1, 2)).flatmap(lambda d: st.tuples(step_functions(d), step_functions(d))))
    @settings(max_examples=200, deadline=None)
    def test_step_function_payload_is_lossless(self, pair):
        f = pair[0] + pair[1]
        back = StepFunctionModel.model_validate(json.loads(dump_json(StepFunctionModel.from_domain(f)))).to_domain()
        assert back == f


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig.model_validate({"levels": [4]})
        assert config.cycle.source == "torus"
        assert config.f_mode == "witness"
        assert config.output.csv is None

    def test_json_alias(self):
        config = PipelineConfig.model_validate({"output": {"json": "out/summary.json"}})
        assert str(config.output.json_path) == "out/summary.json"

    @pytest.mark.parametrize("data", [
        {"levels": [4], "unknown": 1},
        {"cycle": {"source": "sphere"}},
        {"cycle": {"dim": 4}},
        {"f_mode": "both"},
        {"cover": {"dim": 1, "members": []}},
    ])
    def test_rejected(self, data):
        with pytest.raises(ValidationError):
            PipelineConfig.model_validate(data)

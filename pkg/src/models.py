"""
models.py — Pydantic Payload, Report and Config Schemas
=========================================================

Defines every structure that leaves or enters the library as text:

Serialization flow:
    domain value → *Model.from_domain(...) → JSON (model_dump_json)
    JSON / TOML  → *Model.model_validate(...) → .to_domain()

Report flow:
    verify_tower        → TowerReport
    check_colouring     → ColouringReport
    essn_bound_report   → EssnBoundReport
    run_pipeline        → PipelineReport (one LevelReport per N)
    verify_suite        → SuiteReport

Design decisions:
    - Rationals are serialized as "p/q" strings (integers as "p"), never
      floats, so downstream tools lose no precision.
    - Report models ignore unknown fields (forward compatible); config
      models forbid them so typos in a TOML file surface immediately.
    - A chain vertex is written as [coord_1, …, coord_k, label]; tower
      vertices carry the label [i, j].
"""

from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, WithJsonSchema

from src.chain_complex import Chain, LabeledVertex
from src.group_lattice import LatticeElement
from src.odometer import CongruenceSet, Residue, StepFunction


# ═══════════════════════════════════════════════════════════════════════
# EXACT RATIONALS
# ═══════════════════════════════════════════════════════════════════════

def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot read {value!r} as an exact rational (floats are rejected)")


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


class _Payload(BaseModel):
    model_config = ConfigDict(extra="ignore", arbitrary_types_allowed=True, populate_by_name=True)


class _Config(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


# ═══════════════════════════════════════════════════════════════════════
# MEASURE ALGEBRA PAYLOADS
# ═══════════════════════════════════════════════════════════════════════

class CongruenceSetModel(_Payload):
    """{"m": modulus, "residues": [[r_1..r_k], ...]} plus the dimension."""

    dim: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    residues: List[List[int]] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, subset: CongruenceSet) -> "CongruenceSetModel":
        return cls(dim=subset.dim, m=subset.modulus, residues=[list(r) for r in sorted(subset.residues)])

    def to_domain(self) -> CongruenceSet:
        return CongruenceSet(self.dim, self.m, frozenset(tuple(r) for r in self.residues))


class StepTermModel(_Payload):
    residues: List[List[int]]
    value: int


def _residues_by_value(f: StepFunction) -> Dict[int, List[Residue]]:
    # residues at f.modulus, not at the period of each value class
    grouped: Dict[int, List[Residue]] = {}
    for r, v in f.values:
        grouped.setdefault(v, []).append(r)
    return dict(sorted(grouped.items()))


class StepFunctionModel(_Payload):
    """A step function as disjoint terms at its canonical modulus."""

    dim: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    terms: List[StepTermModel] = Field(default_factory=list)
    integral_abs: Optional[Rational] = None   # informational, recomputed on load

    @classmethod
    def from_domain(cls, f: StepFunction) -> "StepFunctionModel":
        return cls(
            dim=f.dim,
            m=f.modulus,
            terms=[
                StepTermModel(residues=[list(r) for r in rs], value=v)
                for v, rs in _residues_by_value(f).items()
            ],
            integral_abs=f.integrate_abs(),
        )

    def to_domain(self) -> StepFunction:
        values = [(tuple(r), t.value) for t in self.terms for r in t.residues]
        return StepFunction(self.dim, self.m, tuple(values))


# ═══════════════════════════════════════════════════════════════════════
# CHAIN PAYLOADS
# ═══════════════════════════════════════════════════════════════════════

def vertex_to_payload(v: LabeledVertex) -> List[Any]:
    label = list(v.label) if isinstance(v.label, tuple) else v.label
    return [*v.group_part.coords, label]


def vertex_from_payload(entry: List[Any]) -> LabeledVertex:
    if len(entry) < 2:
        raise ValueError(f"vertex {entry!r} needs at least one coordinate and a label")
    *coords, label = entry
    if isinstance(label, list):
        label = tuple(label)
    return LabeledVertex(LatticeElement(tuple(int(c) for c in coords)), label)


def _sort_key(simplex: tuple) -> tuple:
    return tuple((v.group_part.coords, repr(v.label)) for v in simplex)


class ChainTermModel(_Payload):
    simplex: List[List[Any]] = Field(..., alias="tuple")
    coeff: int


class ChainModel(_Payload):
    """{"arity": n, "terms": [{"tuple": [[coords…, label]…], "coeff": c}]}"""

    arity: Optional[int] = None
    terms: List[ChainTermModel] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, c: Chain) -> "ChainModel":
        return cls(
            arity=c.arity,
            terms=[
                ChainTermModel(simplex=[vertex_to_payload(v) for v in s], coeff=coeff)
                for s, coeff in sorted(c.items(), key=lambda item: _sort_key(item[0]))
            ],
        )

    def to_domain(self) -> Chain:
        return Chain(
            [(tuple(vertex_from_payload(v) for v in t.simplex), t.coeff) for t in self.terms],
            arity=self.arity,
        )


class ParamTermModel(_Payload):
    simplex: List[List[Any]] = Field(..., alias="tuple")
    coefficient: StepFunctionModel


class ParamChainModel(_Payload):
    """A parametrised chain: S-tuples with step-function coefficients."""

    arity: Optional[int] = None
    dim: int
    terms: List[ParamTermModel] = Field(default_factory=list)
    essential_norm: Optional[Rational] = None
    l1_norm: Optional[Rational] = None


# ═══════════════════════════════════════════════════════════════════════
# REPORTS
# ═══════════════════════════════════════════════════════════════════════

class CheckResult(_Payload):
    name: str
    passed: bool
    witness: Optional[str] = None   # first counterexample, human-readable


class TowerDescription(_Payload):
    """Tower layout: subgroup basis (columns), level N and coset representatives."""

    dim: int
    basis: List[List[int]]
    level: Optional[int] = None
    coset_reps: List[List[int]] = Field(default_factory=list)
    modulus: int
    shape_size: List[int] = Field(default_factory=list)
    bases: List[CongruenceSetModel] = Field(default_factory=list)


class TowerReport(_Payload):
    passed: bool
    delta: Rational
    max_defect: Rational
    checks: List[CheckResult] = Field(default_factory=list)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


class ColouredTupleModel(_Payload):
    simplex: List[List[Any]] = Field(..., alias="tuple")
    positions: Optional[List[int]] = None   # (k, l) of the first witness
    index: Optional[Union[int, str]] = None  # cover index i of the witness


class ColouringReport(_Payload):
    passed: bool
    tuples: List[ColouredTupleModel] = Field(default_factory=list)


class EssnBoundReport(_Payload):
    """{essn, bound, tuples, delta} for one application of the Rokhlin map."""

    essn: Rational
    bound: Rational
    tuples: int
    delta: Rational


CSV_COLUMNS = ("level", "delta", "l1_z", "essn", "bound")


class LevelReport(_Payload):
    level: int
    delta: Rational           # δ(N), measured invariance defect
    l1_z: int                 # |z′|_1
    essn: Rational            # essn Φ^δ(z′)
    bound: Rational           # (n+1)!·δ(N)·|z′|_1
    eta_norm: Rational        # |η(Φ^δ(z′))|_1
    delta_cover: Rational     # defect against the full cover F
    towers_verified: bool = True

    def csv_row(self) -> List[str]:
        return [
            str(self.level),
            format_rational(self.delta),
            str(self.l1_z),
            format_rational(self.essn),
            format_rational(self.bound),
        ]


class PipelineReport(_Payload):
    source: str
    dim: int
    f_mode: str
    factorial: int                      # (n+1)!
    filling_factor: Rational = Fraction(1)
    levels: List[LevelReport] = Field(default_factory=list)
    decreasing: bool = False
    halving: bool = False
    conclusion: str = ""


class PropertyResult(_Payload):
    name: str
    module: str
    passed: bool
    cases: int
    witness: Optional[str] = None


class SuiteReport(_Payload):
    seed: int
    passed: bool
    results: List[PropertyResult] = Field(default_factory=list)


# ═══════════════════════════════════════════════════════════════════════
# CONFIGURATION (TOML)
# ═══════════════════════════════════════════════════════════════════════

class CoverMemberModel(_Config):
    """One cover member: index i, subgroup basis columns, declared overlaps."""

    index: int
    basis: List[List[int]]
    overlaps: List[List[int]] = Field(default_factory=list)


class CoverSpecModel(_Config):
    dim: int = Field(..., ge=1)
    members: List[CoverMemberModel] = Field(..., min_length=1)


class CycleConfig(_Config):
    source: Literal["torus", "file"] = "torus"
    dim: Optional[int] = Field(default=None, ge=1, le=3)
    path: Optional[Path] = None


class OutputConfig(_Config):
    csv: Optional[Path] = None
    json_path: Optional[Path] = Field(default=None, alias="json")


class PipelineConfig(_Config):
    """[cycle] + levels + optional [cover] / [output] tables."""

    cycle: CycleConfig = Field(default_factory=CycleConfig)
    levels: List[int] = Field(default_factory=list)
    cover: Optional[CoverSpecModel] = None
    f_mode: Literal["witness", "cover"] = "witness"
    output: OutputConfig = Field(default_factory=OutputConfig)


def dump_json(model: BaseModel) -> str:
    """JSON text in declared field order, aliases applied."""
    return model.model_dump_json(by_alias=True, indent=2)

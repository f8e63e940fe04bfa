"""
param_chains.py — Parametrised Chains L∞(X,Z) ⊗ Z[S^{*+1}]
============================================================

Two representations of the same complex:

    TensorChain   Σ_r f_r ⊗ σ_r with f_r a step function and σ_r an integer
                  chain (the tensor form; equal up to tensor relations)
    ParamChain    finitely supported map S^{n+1} → StepFunction, read as the
                  function (x, s) ↦ f_s(x) (the function form)

    xi   : TensorChain → ParamChain,  ξ(f ⊗ s)(x, t) = f(x) if t = s else 0
    zeta : ParamChain  → TensorChain, ζ(c) = Σ_s c_s ⊗ (s)

Boundary on the function form inserts a free coordinate t ∈ S and sums over
it. The sum is never taken over S itself: it is carried out as the face-map
pushforward of the tuple-indexed terms. boundary_literal evaluates the
inserted-coordinate sum directly over the finite coordinate support and is
used to cross-check the pushforward.

Accumulation works on residue maps at one common modulus and builds the
canonical StepFunction once per output tuple.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.chain_complex import Chain, SimplexTuple, augment, boundary, faces, is_degenerate, translate_tuple
from src.errors import ArityError, DimensionMismatchError
from src.group_lattice import LatticeElement
from src.models import ParamChainModel, ParamTermModel, StepFunctionModel, vertex_to_payload
from src.odometer import Residue, StepFunction, lifts


def _common_modulus(functions: Iterable[StepFunction]) -> int:
    return lcm(1, *(f.modulus for f in functions))


def _accumulate(
    dim: int,
    contributions: Iterable[Tuple[SimplexTuple, StepFunction, int]],
) -> Dict[SimplexTuple, StepFunction]:
    """Σ coefficient·f grouped by tuple, built once per tuple."""
    contributions = list(contributions)
    modulus = _common_modulus(f for _, f, _ in contributions)
    acc: Dict[SimplexTuple, Dict[Residue, int]] = {}
    for simplex, f, coefficient in contributions:
        if not coefficient or f.is_zero():
            continue
        bucket = acc.setdefault(simplex, {})
        for r, v in f.values:
            for lift in lifts(r, f.modulus, modulus):
                bucket[lift] = bucket.get(lift, 0) + coefficient * v
    out: Dict[SimplexTuple, StepFunction] = {}
    for simplex, values in acc.items():
        f = StepFunction.from_map(dim, modulus, values)
        if not f.is_zero():
            out[simplex] = f
    return out


# ═══════════════════════════════════════════════════════════════════════
# FUNCTION FORM
# ═══════════════════════════════════════════════════════════════════════

class ParamChain:
    """A finitely supported map from S-tuples to non-zero step functions."""

    __slots__ = ("_terms", "_arity", "_dim")

    def __init__(
        self,
        dim: int,
        terms: Union[Mapping[SimplexTuple, StepFunction], Iterable[Tuple[SimplexTuple, StepFunction]]] = (),
        arity: Optional[int] = None,
    ) -> None:
        items = list(terms.items() if isinstance(terms, Mapping) else terms)
        for _, f in items:
            if f.dim != dim:
                raise DimensionMismatchError(f"coefficient of dimension {f.dim} in a chain over X^{dim}")
        merged = _accumulate(dim, ((tuple(s), f, 1) for s, f in items))
        arities = {len(s) - 1 for s in merged}
        if len(arities) > 1:
            raise ArityError(f"mixed arities {sorted(arities)} in one parametrised chain")
        if arities:
            found = arities.pop()
            if arity is not None and arity != found:
                raise ArityError(f"declared arity {arity} but tuples have arity {found}")
            arity = found
        self._terms = merged
        self._arity = arity
        self._dim = dim

    @classmethod
    def zero(cls, dim: int, arity: Optional[int] = None) -> "ParamChain":
        return cls(dim, (), arity=arity)

    @classmethod
    def elementary(cls, f: StepFunction, simplex: Sequence) -> "ParamChain":
        return cls(f.dim, [(tuple(simplex), f)], arity=len(simplex) - 1)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def arity(self) -> Optional[int]:
        return self._arity

    def items(self):
        return self._terms.items()

    def coefficient(self, simplex: Sequence) -> StepFunction:
        return self._terms.get(tuple(simplex), StepFunction.zero(self._dim))

    def evaluate(self, point, simplex: Sequence) -> int:
        """c(x, s)."""
        return self.coefficient(simplex).evaluate(point)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[SimplexTuple]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParamChain):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def _merged_arity(self, other: "ParamChain") -> Optional[int]:
        if self._dim != other._dim:
            raise DimensionMismatchError(f"dimension mismatch: {self._dim} vs {other._dim}")
        if self._arity is None:
            return other._arity
        if other._arity is None or other._arity == self._arity:
            return self._arity
        if not self._terms:
            return other._arity
        if not other._terms:
            return self._arity
        raise ArityError(f"cannot add parametrised chains of arity {self._arity} and {other._arity}")

    def __add__(self, other: "ParamChain") -> "ParamChain":
        arity = self._merged_arity(other)
        return ParamChain(self._dim, list(self._terms.items()) + list(other._terms.items()), arity=arity)

    def __neg__(self) -> "ParamChain":
        return ParamChain(self._dim, {s: -f for s, f in self._terms.items()}, arity=self._arity)

    def __sub__(self, other: "ParamChain") -> "ParamChain":
        return self + (-other)

    def scale(self, factor: int) -> "ParamChain":
        return ParamChain(self._dim, {s: f.scale(factor) for s, f in self._terms.items()}, arity=self._arity)

    def __repr__(self) -> str:
        return f"ParamChain[{self._arity}](terms={len(self._terms)}, dim={self._dim})"


def translate(c: ParamChain, g: LatticeElement) -> ParamChain:
    """(γ·c)(x, s) = c(γ^{-1}·x, γ^{-1}·s)."""
    return ParamChain(
        c.dim,
        {translate_tuple(s, g): f.translate(g) for s, f in c.items()},
        arity=c.arity,
    )


def param_boundary(c: ParamChain) -> ParamChain:
    if c.arity is None:
        return ParamChain.zero(c.dim)
    if c.arity < 1:
        raise ArityError("the boundary is only defined in arity >= 1")
    pushed = _accumulate(
        c.dim,
        ((face, f, sign) for s, f in c.items() for sign, face in faces(s)),
    )
    return ParamChain(c.dim, pushed, arity=c.arity - 1)


def boundary_literal(c: ParamChain, face_tuple: Sequence) -> StepFunction:
    """(∂c)(·, s) = Σ_j (-1)^j Σ_t c(·, s_0..s_{j-1}, t, s_j..s_{n-1}).

    t ranges over every vertex occurring at position j in the support of c;
    all other t contribute zero.
    """
    if c.arity is None:
        return StepFunction.zero(c.dim)
    if c.arity < 1:
        raise ArityError("the boundary is only defined in arity >= 1")
    face_tuple = tuple(face_tuple)
    if len(face_tuple) != c.arity:
        raise ArityError(f"face tuple of length {len(face_tuple)} for a chain of arity {c.arity}")
    total = StepFunction.zero(c.dim)
    for j in range(c.arity + 1):
        inserted = {s[j] for s in c}
        for t in sorted(inserted, key=repr):
            candidate = face_tuple[:j] + (t,) + face_tuple[j:]
            total = total + c.coefficient(candidate).scale((-1) ** j)
    return total


def augment_tilde(c: ParamChain) -> StepFunction:
    """Σ_s f(·, s) in arity 0."""
    if c.arity not in (None, 0):
        raise ArityError(f"augmentation needs arity 0, got {c.arity}")
    total = StepFunction.zero(c.dim)
    for _, f in c.items():
        total = total + f
    return total


def param_essential_norm(c: ParamChain) -> Fraction:
    return sum((f.integrate_abs() for s, f in c.items() if not is_degenerate(s)), Fraction(0))


def param_l1_norm(c: ParamChain) -> Fraction:
    return sum((f.integrate_abs() for _, f in c.items()), Fraction(0))


def apply_chain_map(c: ParamChain, chain_map: Callable[[Chain], Chain]) -> ParamChain:
    """(id ⊗ φ)(c) for a Z-linear map φ on integer chains."""
    contributions: List[Tuple[SimplexTuple, StepFunction, int]] = []
    arity: Optional[int] = None
    for s, f in c.items():
        image = chain_map(Chain.single(s))
        if image.arity is not None:
            arity = image.arity
        contributions.extend((t, f, coefficient) for t, coefficient in image.items())
    if arity is None and c.arity is not None:
        arity = chain_map(Chain.zero(c.arity)).arity
    return ParamChain(c.dim, _accumulate(c.dim, contributions), arity=arity)


# ═══════════════════════════════════════════════════════════════════════
# TENSOR FORM
# ═══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class TensorChain:
    """Σ_r f_r ⊗ σ_r. Equality is equality in the tensor product."""

    dim: int
    pairs: Tuple[Tuple[StepFunction, Chain], ...] = ()
    arity: Optional[int] = None

    def __post_init__(self) -> None:
        pairs = tuple(self.pairs)
        arities = {chain.arity for _, chain in pairs if chain}
        if self.arity is not None:
            arities.add(self.arity)
        if len(arities) > 1:
            raise ArityError(f"mixed arities {sorted(arities)} in one tensor chain")
        if any(f.dim != self.dim for f, _ in pairs):
            raise DimensionMismatchError(f"coefficients must live on X^{self.dim}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "arity", next(iter(arities), None))

    @classmethod
    def elementary(cls, f: StepFunction, chain: Chain) -> "TensorChain":
        return cls(f.dim, ((f, chain),), arity=chain.arity)

    def canonical(self) -> Dict[SimplexTuple, StepFunction]:
        return _accumulate(
            self.dim,
            ((s, f, coefficient) for f, chain in self.pairs for s, coefficient in chain.items()),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorChain):
            return NotImplemented
        return self.dim == other.dim and self.canonical() == other.canonical()

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "TensorChain") -> "TensorChain":
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")
        arity = self.arity if self.arity is not None else other.arity
        return TensorChain(self.dim, self.pairs + other.pairs, arity=arity)

    def boundary(self) -> "TensorChain":
        """id ⊗ ∂."""
        if self.arity is None:
            return TensorChain(self.dim)
        if self.arity < 1:
            raise ArityError("the boundary is only defined in arity >= 1")
        return TensorChain(
            self.dim,
            tuple((f, boundary(chain)) for f, chain in self.pairs if chain),
            arity=self.arity - 1,
        )

    def augment(self) -> StepFunction:
        """id ⊗ ε."""
        if self.arity not in (None, 0):
            raise ArityError(f"augmentation needs arity 0, got {self.arity}")
        total = StepFunction.zero(self.dim)
        for f, chain in self.pairs:
            total = total + f.scale(augment(chain))
        return total


def xi(c: TensorChain) -> ParamChain:
    return ParamChain(c.dim, c.canonical(), arity=c.arity)


def zeta(c: ParamChain) -> TensorChain:
    return TensorChain(
        c.dim,
        tuple((f, Chain.single(s)) for s, f in c.items()),
        arity=c.arity,
    )


def to_model(c: ParamChain) -> ParamChainModel:
    ordered = sorted(c.items(), key=lambda item: tuple((v.group_part.coords, repr(v.label)) for v in item[0]))
    return ParamChainModel(
        arity=c.arity,
        dim=c.dim,
        terms=[
            ParamTermModel(simplex=[vertex_to_payload(v) for v in s], coefficient=StepFunctionModel.from_domain(f))
            for s, f in ordered
        ],
        essential_norm=param_essential_norm(c),
        l1_norm=param_l1_norm(c),
    )

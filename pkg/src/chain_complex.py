"""
chain_complex.py — Sparse Integer Chains over Free Γ-Sets
===========================================================

Chains of the complexes Z[E^{*+1}] (E = Γ × I) and Z[S^{*+1}] (S = tower
vertices): finite integer combinations of (n+1)-tuples of vertices.

    LabeledVertex    (γ, label); Γ translates the group part
    Chain            sparse map tuple → non-zero integer, fixed arity n

Operations:
    boundary                  ∂(v_0,…,v_n) = Σ_j (-1)^j (v_0,…,v̂_j,…,v_n)
    augment                   sum of coefficients in arity 0
    l1_norm / essential_norm
    coinvariant_normal_form   translate each tuple so its first vertex sits
                              at the identity; classes in Z ⊗_{ZΓ} Z[E^{n+1}]
                              agree iff their normal forms agree

A tuple is degenerate iff two of its entries are equal. Vertices only need
to be hashable and expose translate(g); the subset vertices of the
barycentric subdivision reuse this module.
"""

from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Dict, Hashable, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from src.errors import ArityError
from src.group_lattice import LatticeElement


@dataclass(frozen=True, order=True)
class LabeledVertex:
    """A vertex (γ, label) of E = Γ × I or S = {(γ, (i, j))}."""

    group_part: LatticeElement
    label: Hashable

    @classmethod
    def of(cls, coords: Sequence[int], label: Hashable) -> "LabeledVertex":
        return cls(LatticeElement(tuple(coords)), label)

    def translate(self, g: LatticeElement) -> "LabeledVertex":
        return LabeledVertex(g + self.group_part, self.label)

    def __repr__(self) -> str:
        return f"<{self.group_part!r}, {self.label!r}>"


SimplexTuple = Tuple[Any, ...]


def is_degenerate(simplex: SimplexTuple) -> bool:
    return len(set(simplex)) < len(simplex)


def translate_tuple(simplex: SimplexTuple, g: LatticeElement) -> SimplexTuple:
    return tuple(v.translate(g) for v in simplex)


class Chain:
    """A finite integer combination of equal-length vertex tuples.

    Zero coefficients are never stored. An empty chain may carry an explicit
    arity or none at all.
    """

    __slots__ = ("_terms", "_arity")

    def __init__(
        self,
        terms: Union[Mapping[SimplexTuple, int], Iterable[Tuple[SimplexTuple, int]]] = (),
        arity: Optional[int] = None,
    ) -> None:
        acc: Dict[SimplexTuple, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for simplex, coefficient in items:
            simplex = tuple(simplex)
            total = acc.get(simplex, 0) + int(coefficient)
            if total:
                acc[simplex] = total
            else:
                acc.pop(simplex, None)
        arities = {len(s) - 1 for s in acc}
        if len(arities) > 1:
            raise ArityError(f"mixed arities {sorted(arities)} in one chain")
        if arities:
            found = arities.pop()
            if arity is not None and arity != found:
                raise ArityError(f"declared arity {arity} but tuples have arity {found}")
            arity = found
        self._terms = acc
        self._arity = arity

    @classmethod
    def single(cls, simplex: Sequence[Any], coefficient: int = 1) -> "Chain":
        return cls({tuple(simplex): coefficient}, arity=len(simplex) - 1)

    @classmethod
    def zero(cls, arity: Optional[int] = None) -> "Chain":
        return cls((), arity=arity)

    @property
    def terms(self) -> Mapping[SimplexTuple, int]:
        return MappingProxyType(self._terms)

    @property
    def arity(self) -> Optional[int]:
        return self._arity

    def items(self):
        return self._terms.items()

    def coefficient(self, simplex: Sequence[Any]) -> int:
        return self._terms.get(tuple(simplex), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[SimplexTuple]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def _merged_arity(self, other: "Chain") -> Optional[int]:
        if self._arity is None:
            return other._arity
        if other._arity is None or other._arity == self._arity:
            return self._arity
        if not self._terms:
            return other._arity
        if not other._terms:
            return self._arity
        raise ArityError(f"cannot add chains of arity {self._arity} and {other._arity}")

    def __add__(self, other: "Chain") -> "Chain":
        arity = self._merged_arity(other)
        return Chain(list(self._terms.items()) + list(other._terms.items()), arity=arity)

    def __neg__(self) -> "Chain":
        return Chain({s: -c for s, c in self._terms.items()}, arity=self._arity)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, factor: int) -> "Chain":
        return Chain({s: factor * c for s, c in self._terms.items()}, arity=self._arity)

    __rmul__ = __mul__

    def translate(self, g: LatticeElement) -> "Chain":
        return Chain(
            {translate_tuple(s, g): c for s, c in self._terms.items()}, arity=self._arity
        )

    def __repr__(self) -> str:
        body = " + ".join(f"{c}·{s}" for s, c in list(self._terms.items())[:6])
        more = " + …" if len(self._terms) > 6 else ""
        return f"Chain[{self._arity}]({body or '0'}{more})"


# ═══════════════════════════════════════════════════════════════════════
# OPERATIONS
# ═══════════════════════════════════════════════════════════════════════

def faces(simplex: SimplexTuple) -> Iterator[Tuple[int, SimplexTuple]]:
    """(sign, face) pairs of the alternating face sum."""
    for j in range(len(simplex)):
        yield (-1) ** j, simplex[:j] + simplex[j + 1:]


def boundary(c: Chain) -> Chain:
    if c.arity is None:
        return Chain.zero()
    if c.arity < 1:
        raise ArityError("the boundary is only defined in arity >= 1")
    out: Dict[SimplexTuple, int] = {}
    for simplex, coefficient in c.items():
        for sign, face in faces(simplex):
            out[face] = out.get(face, 0) + sign * coefficient
    return Chain(out, arity=c.arity - 1)


def augment(c: Chain) -> int:
    if c.arity not in (None, 0):
        raise ArityError(f"augmentation needs arity 0, got {c.arity}")
    return sum(c.terms.values())


def l1_norm(c: Chain) -> int:
    return sum(abs(v) for v in c.terms.values())


def essential_norm(c: Chain) -> int:
    return sum(abs(v) for s, v in c.items() if not is_degenerate(s))


def coinvariant_normal_form(c: Chain) -> Chain:
    """Representative with the first vertex of every tuple at the identity."""
    out: Dict[SimplexTuple, int] = {}
    for simplex, coefficient in c.items():
        shifted = translate_tuple(simplex, -simplex[0].group_part)
        out[shifted] = out.get(shifted, 0) + coefficient
    return Chain(out, arity=c.arity)

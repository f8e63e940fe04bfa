"""
subdivision.py — Degenerate-Killing Operator η = ρ∘bary
=========================================================

bary sends a tuple of S-vertices to the barycentric subdivision of the
simplex it spans, written in the subset complex D (vertices are finite
non-empty subsets of S):

    bary(x_0)         = ({x_0})
    bary(x_0, …, x_k) = Σ_j (-1)^{j+k} (bary(x_0, …, x̂_j, …, x_k), {x_0, …, x_k})

where (·, V) appends the subset V to every tuple. Degenerate tuples map
to 0 and |bary_k| ≤ (k+1)!.

collapse_rho maps D back to S through a fundamental domain for the
diagonal Γ-action on D. The domain used here puts the lexicographically
least member of a subset at the identity; a subset d = γ·d_0 with d_0 in
the domain collapses to γ·σ_0.

η is a Γ-equivariant chain map extending id_Z, kills every degenerate tuple
and satisfies |η_k(c)|_1 ≤ (k+1)!·essn(c). σ_0 must be the same for every
chain that is compared under η.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, Optional, Tuple

from src.chain_complex import Chain, LabeledVertex, SimplexTuple
from src.errors import UnresolvableVertexError
from src.group_lattice import LatticeElement


@dataclass(frozen=True)
class SubsetVertex:
    """A finite non-empty set of S-vertices, acted on diagonally."""

    members: FrozenSet[LabeledVertex]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ValueError("a subset vertex must be non-empty")

    @classmethod
    def of(cls, *members: LabeledVertex) -> "SubsetVertex":
        return cls(frozenset(members))

    @property
    def least(self) -> LabeledVertex:
        return min(self.members)

    def translate(self, g: LatticeElement) -> "SubsetVertex":
        return SubsetVertex(frozenset(v.translate(g) for v in self.members))

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(v) for v in sorted(self.members)) + "}"


# ═══════════════════════════════════════════════════════════════════════
# BARYCENTRIC SUBDIVISION
# ═══════════════════════════════════════════════════════════════════════

def _bary_tuple(simplex: SimplexTuple, memo: Dict[SimplexTuple, Dict[SimplexTuple, int]]) -> Dict[SimplexTuple, int]:
    cached = memo.get(simplex)
    if cached is not None:
        return cached
    k = len(simplex) - 1
    if k == 0:
        result = {(SubsetVertex.of(simplex[0]),): 1}
    else:
        top = SubsetVertex(frozenset(simplex))
        result: Dict[SimplexTuple, int] = {}
        for j in range(k + 1):
            sign = (-1) ** (j + k)
            for chain_tuple, coefficient in _bary_tuple(simplex[:j] + simplex[j + 1:], memo).items():
                key = chain_tuple + (top,)
                total = result.get(key, 0) + sign * coefficient
                if total:
                    result[key] = total
                else:
                    result.pop(key, None)
    memo[simplex] = result
    return result


def bary(c: Chain) -> Chain:
    memo: Dict[SimplexTuple, Dict[SimplexTuple, int]] = {}
    out: Dict[SimplexTuple, int] = {}
    for simplex, coefficient in c.items():
        for image, multiplicity in _bary_tuple(simplex, memo).items():
            out[image] = out.get(image, 0) + coefficient * multiplicity
    return Chain(out, arity=c.arity)


# ═══════════════════════════════════════════════════════════════════════
# COLLAPSE THROUGH A FUNDAMENTAL DOMAIN
# ═══════════════════════════════════════════════════════════════════════

class LexMinFundamentalDomain:
    """Orbit section for the diagonal Γ-action on D: subsets whose least
    member has identity group part."""

    def resolve(self, d: SubsetVertex) -> Tuple[LatticeElement, SubsetVertex]:
        """(γ, d_0) with d = γ·d_0 and d_0 in the domain."""
        if not isinstance(d, SubsetVertex):
            raise UnresolvableVertexError(f"{d!r} is not a subset vertex")
        gamma = d.least.group_part
        return gamma, d.translate(-gamma)

    def contains(self, d: SubsetVertex) -> bool:
        return isinstance(d, SubsetVertex) and d.least.group_part.is_identity


def default_sigma0(dim: int, labels: Iterable[Hashable]) -> LabeledVertex:
    """(identity, least label): the first vertex of the domain in label order."""
    labels = sorted(set(labels))
    if not labels:
        raise ValueError("at least one label is needed to choose σ_0")
    return LabeledVertex(LatticeElement.zero(dim), labels[0])


def collapse_rho(c: Chain, fd: LexMinFundamentalDomain, sigma0: LabeledVertex) -> Chain:
    out: Dict[SimplexTuple, int] = {}
    for simplex, coefficient in c.items():
        image = []
        for d in simplex:
            gamma, _ = fd.resolve(d)
            image.append(sigma0.translate(gamma))
        key = tuple(image)
        out[key] = out.get(key, 0) + coefficient
    return Chain(out, arity=c.arity)


def eta(
    c: Chain,
    sigma0: Optional[LabeledVertex] = None,
    fd: Optional[LexMinFundamentalDomain] = None,
) -> Chain:
    """η = ρ∘bary. Without σ_0 the default is taken from the labels of c."""
    if not c:
        return Chain.zero(c.arity)
    if sigma0 is None:
        vertices = [v for simplex in c for v in simplex]
        sigma0 = default_sigma0(vertices[0].group_part.dim, (v.label for v in vertices))
    return collapse_rho(bary(c), fd or LexMinFundamentalDomain(), sigma0)

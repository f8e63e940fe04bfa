"""
selftest.py — Seeded Property Suite
=====================================

Runs the structural properties of every module against seeded random
instances and summarizes them in a SuiteReport. Each property draws from
its own random.Random seeded with "<seed>/<name>", so a single failing
property reproduces without running the others, and the same seed always
yields a byte-identical report.

    property fn(rng) → (cases checked, first witness or None)

Scale is kept at desk level (k ≤ 2, N ≤ 4, arity ≤ 3) so the full suite
finishes in seconds; the pytest suite under tests/ covers the same ground
with larger example counts.
"""

import itertools
import logging
import math
import random
from fractions import Fraction
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple

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
from src.cover_cycles import check_colouring_cycle, derive_F, is_coinvariant_cycle, torus_cover, torus_cycle
from src.group_lattice import (
    FiniteGenSet,
    LatticeElement,
    Sublattice,
    compose,
    folner_box,
    invariance_defect,
)
from src.models import PropertyResult, SuiteReport
from src.odometer import CongruenceSet, StepFunction
from src.oracle import brute_force_phi
from src.param_chains import (
    ParamChain,
    TensorChain,
    augment_tilde,
    boundary_literal,
    param_boundary,
    param_essential_norm,
    xi,
    zeta,
)
from src.param_chains import translate as translate_param
from src.rokhlin_map import essn_bound_report, phi_delta, phi_delta_chain
from src.rokhlin_tower import EquivariantPartition, RokhlinTower, build_tower, verify_tower
from src.subdivision import bary, default_sigma0, eta

logger = logging.getLogger(__name__)

Outcome = Tuple[int, Optional[str]]

SUBLATTICES: Tuple[Sublattice, ...] = (
    Sublattice.standard(1),
    Sublattice(1, ((2,),)),
    Sublattice.standard(2),
    Sublattice(2, ((2, 0), (0, 1))),
    Sublattice(2, ((1, 1), (1, -1))),
)


# ═══════════════════════════════════════════════════════════════════════
# RANDOM INSTANCES
# ═══════════════════════════════════════════════════════════════════════

def unit_box_generators(subgroup: Sublattice) -> FiniteGenSet:
    """{Σ ε_l·b_l : ε ∈ {-1,0,1}^r} over the basis of the subgroup."""
    return FiniteGenSet(frozenset(
        subgroup.combination(eps) for eps in itertools.product((-1, 0, 1), repeat=subgroup.rank)
    ))


def mixed_partition(dim: int, n: int) -> EquivariantPartition:
    """Cover index 0 over Z^k (|J| = 1), index 1 over an index-2 sublattice (|J| = 2)."""
    coarse = Sublattice(1, ((2,),)) if dim == 1 else Sublattice(2, ((2, 0), (0, 1)))
    return EquivariantPartition.of({0: build_tower(Sublattice.standard(dim), n), 1: build_tower(coarse, n)})


def random_element(rng: random.Random, dim: int, radius: int = 4) -> LatticeElement:
    return LatticeElement(tuple(rng.randint(-radius, radius) for _ in range(dim)))


def random_tuple(rng: random.Random, dim: int, size: int, labels: Sequence, radius: int = 3) -> tuple:
    return tuple(LabeledVertex(random_element(rng, dim, radius), rng.choice(list(labels))) for _ in range(size))


def random_chain(rng: random.Random, dim: int, arity: int, labels: Sequence, terms: int = 4, radius: int = 2) -> Chain:
    return Chain(
        [(random_tuple(rng, dim, arity + 1, labels, radius), rng.choice((-3, -2, -1, 1, 2, 3))) for _ in range(terms)],
        arity=arity,
    )


def random_congruence(rng: random.Random, dim: int) -> CongruenceSet:
    m = rng.choice((1, 2, 3, 4, 6))
    residues = [r for r in itertools.product(range(m), repeat=dim) if rng.random() < 0.4]
    return CongruenceSet(dim, m, frozenset(residues))


def random_step(rng: random.Random, dim: int) -> StepFunction:
    m = rng.choice((1, 2, 3, 4))
    return StepFunction.from_map(
        dim, m, {r: rng.randint(-2, 2) for r in itertools.product(range(m), repeat=dim)}
    )


def random_param_chain(rng: random.Random, dim: int, arity: int, terms: int = 3) -> ParamChain:
    labels = [(0, 0), (1, 0), (1, 1)]
    return ParamChain(
        dim,
        [(random_tuple(rng, dim, arity + 1, labels, 1), random_step(rng, dim)) for _ in range(terms)],
        arity=arity,
    )


def coloured_tuple(rng: random.Random, partition: EquivariantPartition, generators: FiniteGenSet, size: int) -> tuple:
    """A random tuple whose first two positions carry a colouring witness."""
    dim = partition.dim
    i = rng.choice(partition.indices)
    local = sorted(generators.restrict(partition.tower(i).subgroup))
    start = random_element(rng, dim, 3)
    rest = random_tuple(rng, dim, size - 2, partition.indices, 3)
    return (LabeledVertex(start, i), LabeledVertex(start + rng.choice(local), i)) + rest


def _loop(cases: int, check: Callable[[int], Optional[str]]) -> Outcome:
    for case in range(cases):
        witness = check(case)
        if witness is not None:
            return case + 1, witness
    return cases, None


# ═══════════════════════════════════════════════════════════════════════
# PROPERTIES
# ═══════════════════════════════════════════════════════════════════════

def _group_law(rng: random.Random) -> Outcome:
    def check(_: int) -> Optional[str]:
        g, h, k = (random_element(rng, 2, 50) for _ in range(3))
        if compose(compose(g, h), k) != compose(g, compose(h, k)) or compose(g, h) != compose(h, g):
            return f"g={g!r} h={h!r} k={k!r}"
        return None
    return _loop(50, check)


def _folner_boxes(rng: random.Random) -> Outcome:
    def check(case: int) -> Optional[str]:
        subgroup = SUBLATTICES[case % len(SUBLATTICES)]
        generators = unit_box_generators(subgroup)
        c_f = invariance_defect(folner_box(subgroup, 1), generators)
        previous = None
        for n in (1, 2, 4, 8, 16):
            box = folner_box(subgroup, n)
            defect = invariance_defect(box, generators)
            if LatticeElement.zero(subgroup.ambient_dim) not in box or len(box) != n ** subgroup.rank:
                return f"basis={subgroup.basis} N={n}: box size {len(box)}"
            if defect > c_f / n or (previous is not None and defect > previous):
                return f"basis={subgroup.basis} N={n}: defect {defect}"
            previous = defect
        return None
    return _loop(len(SUBLATTICES), check)


def _measure_algebra(rng: random.Random) -> Outcome:
    def check(_: int) -> Optional[str]:
        dim = rng.choice((1, 2))
        a = random_congruence(rng, dim)
        g, h = random_element(rng, dim), random_element(rng, dim)
        if a.translate(g).measure() != a.measure():
            return f"measure moved: {a!r} by {g!r}"
        if a.translate(h).translate(g) != a.translate(compose(g, h)):
            return f"action law: {a!r} g={g!r} h={h!r}"
        m = rng.choice((2, 3, 4, 5))
        point = tuple(rng.randrange(m) for _ in range(dim))
        single = CongruenceSet.congruence(m, point)
        if any(c % m for c in g.coords) and not single.translate(g).intersect(single).is_empty():
            return f"not free: m={m} g={g!r}"
        f1, f2 = random_step(rng, dim), random_step(rng, dim)
        if (f1 + f2).integrate_abs() > f1.integrate_abs() + f2.integrate_abs():
            return f"triangle inequality: {f1!r} {f2!r}"
        if StepFunction(f1.dim, f1.modulus, f1.values) != f1:
            return f"canonical form not idempotent: {f1!r}"
        return None
    return _loop(40, check)


def _tower_exactness(rng: random.Random, inject_fault: bool = False) -> Outcome:
    towers: List[RokhlinTower] = [
        build_tower(subgroup, n) for subgroup in SUBLATTICES for n in (1, 2, 3, 4)
    ]
    if inject_fault:
        good = build_tower(Sublattice(1, ((2,),)), 2)
        towers.append(RokhlinTower(good.subgroup, (good.bases[0], good.bases[0]), good.shapes, level=2))

    def check(case: int) -> Optional[str]:
        tower = towers[case]
        generators = unit_box_generators(tower.subgroup)
        delta = max(invariance_defect(t, generators) for t in tower.shapes)
        report = verify_tower(tower, generators, delta)
        if not report.passed:
            failed = report.failures()[0]
            return f"basis={tower.subgroup.basis} N={tower.level}: {failed.name}: {failed.witness}"
        return None
    return _loop(len(towers), check)


def _partition_fibers(rng: random.Random) -> Outcome:
    def check(_: int) -> Optional[str]:
        dim = rng.choice((1, 2))
        partition = mixed_partition(dim, rng.choice((2, 3)))
        e = random_tuple(rng, dim, 1, partition.indices)[0]
        cells = [partition.tower_cell(s)[0] for s in sorted(partition.support(e))]
        if sum((c.measure() for c in cells), Fraction(0)) != 1:
            return f"fiber of {e!r} not covered"
        for a, b in itertools.combinations(cells, 2):
            if not a.intersect(b).is_empty():
                return f"fiber of {e!r}: overlapping cells {a!r} {b!r}"
        gamma = random_element(rng, dim)
        s = sorted(partition.support(e))[0]
        x, es = partition.tower_cell(s)
        x2, es2 = partition.tower_cell(s.translate(gamma))
        if x2 != x.translate(gamma) or es2 != frozenset(v.translate(gamma) for v in es):
            return f"tower_cell not equivariant at {s!r}, γ={gamma!r}"
        return None
    return _loop(20, check)


def _chain_complex(rng: random.Random) -> Outcome:
    def check(_: int) -> Optional[str]:
        dim = rng.choice((1, 2))
        arity = rng.randint(1, 4)
        c = random_chain(rng, dim, arity, (0, 1))
        gamma = random_element(rng, dim)
        if arity >= 2 and boundary(boundary(c)):
            return f"∂∂ ≠ 0 on {c!r}"
        if boundary(c.translate(gamma)) != boundary(c).translate(gamma):
            return f"boundary not equivariant on {c!r}"
        if essential_norm(c) > l1_norm(c):
            return f"essn > l1 on {c!r}"
        nf = coinvariant_normal_form(c)
        if coinvariant_normal_form(nf) != nf or coinvariant_normal_form(c.translate(gamma)) != nf:
            return f"normal form not stable on {c!r}"
        if arity == 1 and augment(boundary(c)) != 0:
            return f"ε∂ ≠ 0 on {c!r}"
        return None
    return _loop(60, check)


def _param_chains(rng: random.Random) -> Outcome:
    def check(_: int) -> Optional[str]:
        dim = rng.choice((1, 2))
        arity = rng.randint(0, 2)
        c = random_param_chain(rng, dim, arity)
        if xi(zeta(c)) != c or zeta(xi(zeta(c))) != zeta(c):
            return f"ξ/ζ round trip failed on {c!r}"
        if param_essential_norm(xi(zeta(c))) != param_essential_norm(c):
            return f"essn not preserved on {c!r}"
        if arity == 0:
            if augment_tilde(c) != zeta(c).augment():
                return f"augmentations disagree on {c!r}"
            return None
        if xi(zeta(c).boundary()) != param_boundary(c):
            return f"ξ does not commute with ∂ on {c!r}"
        db = param_boundary(c)
        for face in db:
            if boundary_literal(c, face) != db.coefficient(face):
                return f"literal boundary disagrees at {face!r}"
        gamma = random_element(rng, dim)
        if param_boundary(translate_param(c, gamma)) != translate_param(db, gamma):
            return f"∂ not equivariant on {c!r}"
        return None
    return _loop(30, check)


def _rokhlin_map(rng: random.Random) -> Outcome:
    partitions = {(dim, n): mixed_partition(dim, n) for dim in (1, 2) for n in (2, 4)}
    constant_one = {dim: StepFunction.constant(dim, 1) for dim in (1, 2)}

    def check(_: int) -> Optional[str]:
        dim, n = rng.choice(sorted(partitions))
        partition = partitions[(dim, n)]
        size = rng.randint(1, 3)
        e = random_tuple(rng, dim, size, partition.indices, 3)
        image = phi_delta(partition, e)
        if image != brute_force_phi(partition, e):
            return f"oracle disagrees on {e!r}"
        gamma = random_element(rng, dim)
        if phi_delta(partition, tuple(v.translate(gamma) for v in e)) != translate_param(image, gamma):
            return f"Φ not equivariant on {e!r}"
        if size == 1:
            if augment_tilde(image) != constant_one[dim]:
                return f"ε̃Φ(e) ≠ 1 for {e!r}"
        elif param_boundary(image) != phi_delta_chain(partition, boundary(Chain.single(e))):
            return f"∂Φ ≠ Φ∂ on {e!r}"
        return None
    return _loop(30, check)


def _norm_estimate(rng: random.Random) -> Outcome:
    generators = {1: FiniteGenSet.of((-1,), (0,), (1,)), 2: unit_box_generators(Sublattice.standard(2))}

    def check(_: int) -> Optional[str]:
        dim = rng.choice((1, 2))
        n = rng.choice((2, 4))
        partition = mixed_partition(dim, n)
        F = generators[dim]
        delta = max(
            invariance_defect(shape, F.restrict(partition.tower(i).subgroup))
            for i in partition.indices for shape in partition.tower(i).shapes
        )
        e = coloured_tuple(rng, partition, F, rng.randint(2, 3))
        report = essn_bound_report(partition, Chain.single(e), delta, F)
        if report.essn > delta:
            return f"essn {report.essn} > δ {delta} for {e!r}"
        return None
    return _loop(20, check)


def _subdivision(rng: random.Random) -> Outcome:
    def check(_: int) -> Optional[str]:
        dim = rng.choice((1, 2))
        arity = rng.randint(0, 3)
        labels = [(0, 0), (1, 0), (1, 1)]
        c = random_chain(rng, dim, arity, labels, terms=3, radius=1)
        sigma0 = default_sigma0(dim, labels)
        image = eta(c, sigma0)
        factorial = math.factorial(arity + 1)
        if l1_norm(image) > factorial * essential_norm(c):
            return f"|η(c)|_1 = {l1_norm(image)} > {factorial}·essn on {c!r}"
        if arity >= 1:
            if boundary(image) != eta(boundary(c), sigma0):
                return f"∂η ≠ η∂ on {c!r}"
            if boundary(bary(c)) != bary(boundary(c)):
                return f"∂bary ≠ bary∂ on {c!r}"
        else:
            if augment(image) != augment(c):
                return f"η does not extend id_Z on {c!r}"
        for simplex in c:
            if is_degenerate(simplex) and eta(Chain.single(simplex), sigma0):
                return f"η keeps degenerate {simplex!r}"
        gamma = random_element(rng, dim)
        if eta(c.translate(gamma), sigma0) != image.translate(gamma):
            return f"η not equivariant on {c!r}"
        return None
    return _loop(40, check)


def _torus_cycles(rng: random.Random) -> Outcome:
    def check(case: int) -> Optional[str]:
        n = case + 1
        z = torus_cycle(n)
        cover = torus_cover(n)
        factorial = math.factorial(n)
        if not is_coinvariant_cycle(z) or l1_norm(z) != factorial:
            return f"torus_cycle({n}) is not a cycle of norm {factorial}"
        if not check_colouring_cycle(z, derive_F(cover), cover.subgroup_map()).passed:
            return f"torus_cycle({n}) fails the colouring condition"
        return None
    return _loop(3, check)


PROPERTIES: Tuple[Tuple[str, str, Callable[..., Outcome]], ...] = (
    ("group_law", "group_lattice", _group_law),
    ("folner_boxes", "group_lattice", _folner_boxes),
    ("measure_algebra", "odometer", _measure_algebra),
    ("tower_exactness", "rokhlin_tower", _tower_exactness),
    ("partition_fibers", "rokhlin_tower", _partition_fibers),
    ("chain_complex", "chain_complex", _chain_complex),
    ("param_chains", "param_chains", _param_chains),
    ("rokhlin_map", "rokhlin_map", _rokhlin_map),
    ("norm_estimate", "rokhlin_map", _norm_estimate),
    ("subdivision", "subdivision", _subdivision),
    ("torus_cycles", "cover_cycles", _torus_cycles),
)


def verify_suite(seed: int, inject_fault: bool = False) -> SuiteReport:
    """Run every property; never raises on a failed property."""
    results: List[PropertyResult] = []
    for name, module, fn in PROPERTIES:
        rng = random.Random(f"{seed}/{name}")
        check = partial(fn, inject_fault=inject_fault) if fn is _tower_exactness else fn
        try:
            cases, witness = check(rng)
        except Exception as exc:
            cases, witness = 0, f"{type(exc).__name__}: {exc}"
        passed = witness is None
        if not passed:
            logger.warning(f"[seed={seed}] {module}.{name} failed: {witness}")
        results.append(PropertyResult(
            name=name,
            module=module,
            passed=passed,
            cases=cases,
            witness=None if passed else f"{witness} (reproduce with seed {seed})",
        ))
    return SuiteReport(seed=seed, passed=all(r.passed for r in results), results=results)

"""
Rokhlin Chains — Source Package
================================

Exact-arithmetic library and CLI for certified vanishing bounds of
parametrised simplicial volume on lattice odometers:
    - main.py          : click CLI entry point (tower, phi, cycle, pipeline, selftest)
    - errors.py        : RokhlinError hierarchy
    - settings.py      : ROKHLIN_* environment settings (pydantic-settings)
    - models.py        : Pydantic payload, report and TOML config schemas
    - group_lattice.py : Z^k, sublattices, Følner boxes, invariance defect
    - odometer.py      : congruence sets and step functions on the odometer
    - rokhlin_tower.py : exact Rokhlin towers and the equivariant partition
    - chain_complex.py : sparse integer chains, boundary, norms, coinvariants
    - param_chains.py  : step-function coefficient chains, ξ/ζ, essn
    - rokhlin_map.py   : the Rokhlin chain map, colouring, norm estimate
    - oracle.py        : brute-force reference for the Rokhlin map
    - subdivision.py   : η = ρ∘bary, the degenerate-killing chain map
    - cover_cycles.py  : cover data, derived F, torus fundamental cycles
    - pipeline.py      : config-driven level sweep and report files
    - selftest.py      : seeded property suite
"""

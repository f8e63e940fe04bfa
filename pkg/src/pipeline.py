"""
pipeline.py — Config-Driven Vanishing-Bound Pipeline
======================================================

Every run flows through the same stages:

    1. Config          → TOML file validated into PipelineConfig
    2. Cycle           → torus_cycle(n) or a chain file, with its cover
    3. Cover checks    → coinvariant cycle, colouring against derived F
    4. Estimate set    → witness-sharpened F_z ("witness") or derived F ("cover")
    5. Per level N     → towers, δ(N), Φ^δ(z′), essn, η, certified bound
    6. Conclusion      → decreasing / halving flags over the level sweep
    7. Report files    → CSV (one row per level) + JSON summary

Key guarantees:
    - δ(N) is the measured invariance defect of the towers built at N,
      never a requested target.
    - Every level asserts essn ≤ δ·|z′|_1, |η|_1 ≤ (n+1)!·essn and
      |η|_1 ≤ (n+1)!·δ·|z′|_1; a violation aborts the run.
    - The filling factor ‖ψ‖ ≤ 1 multiplies the bound by one and is logged.
    - Levels are independent and may run on a thread pool; the report is
      always assembled in ascending N, so reruns are identical.
"""

import csv
import io
import json
import logging
import math
import os
import tempfile
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Tuple

from pydantic import ValidationError

from src.chain_complex import Chain, l1_norm
from src.cover_cycles import (
    CoverSpec,
    check_colouring_cycle,
    cover_from_model,
    derive_F,
    is_coinvariant_cycle,
    torus_cover,
    torus_cycle,
)
from src.errors import ColouringError, ConfigError, EstimateViolationError
from src.group_lattice import FiniteGenSet, invariance_defect
from src.models import CSV_COLUMNS, ChainModel, LevelReport, PipelineConfig, PipelineReport, dump_json
from src.param_chains import apply_chain_map, param_l1_norm
from src.rokhlin_map import certify_estimate, colouring_satisfied, witness_F
from src.rokhlin_tower import EquivariantPartition, RokhlinTower, build_tower
from src.settings import Settings, get_settings
from src.subdivision import default_sigma0, eta

logger = logging.getLogger(__name__)

FILLING_FACTOR = Fraction(1)
DECAY_CONCLUSION = "parametrised norm upper bound → 0"
NO_DECAY_CONCLUSION = "no decay certified"


# ═══════════════════════════════════════════════════════════════════════
# CONFIGURATION
# ═══════════════════════════════════════════════════════════════════════

def load_config(path: Path) -> PipelineConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    try:
        config = PipelineConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc
    if config.cycle.path is not None and not config.cycle.path.is_absolute():
        config.cycle.path = path.parent / config.cycle.path
    return config


def load_chain(path: Path) -> Chain:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return ChainModel.model_validate(payload).to_domain()
    except FileNotFoundError:
        raise ConfigError(f"chain file not found: {path}") from None
    except (json.JSONDecodeError, ValidationError) as exc:
        raise ConfigError(f"chain file {path} is not a valid chain: {exc}") from exc


def resolve_cycle(config: PipelineConfig) -> Tuple[str, Chain, CoverSpec]:
    """(source description, cycle z′, cover) for a config."""
    if config.cycle.source == "torus":
        if config.cycle.dim is None:
            raise ConfigError("cycle.source = 'torus' needs cycle.dim")
        n = config.cycle.dim
        z = torus_cycle(n)
        source = f"torus(n={n})"
        dim = n
    else:
        if config.cycle.path is None:
            raise ConfigError("cycle.source = 'file' needs cycle.path")
        z = load_chain(config.cycle.path)
        if not z:
            raise ConfigError(f"chain file {config.cycle.path} holds the zero chain")
        dim = next(iter(z))[0].group_part.dim
        source = f"file:{config.cycle.path.name}"
    cover = cover_from_model(config.cover) if config.cover is not None else torus_cover(dim)
    if cover.dim != dim:
        raise ConfigError(f"cover lives in Z^{cover.dim} but the cycle in Z^{dim}")
    return source, z, cover


def _validate_levels(levels: List[int]) -> None:
    if not levels:
        raise ConfigError("no levels")
    if any(n < 1 for n in levels):
        raise ConfigError(f"levels must be positive, got {levels}")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ConfigError(f"levels must be strictly increasing, got {levels}")


# ═══════════════════════════════════════════════════════════════════════
# ONE LEVEL
# ═══════════════════════════════════════════════════════════════════════

def measured_delta(towers: Dict[Hashable, RokhlinTower], generators: FiniteGenSet) -> Fraction:
    return max(
        invariance_defect(shape, generators.restrict(tower.subgroup))
        for tower in towers.values()
        for shape in tower.shapes
    )


def run_level(
    n: int,
    z: Chain,
    cover: CoverSpec,
    estimate_F: FiniteGenSet,
    cover_F: FiniteGenSet,
    max_modulus: int,
) -> LevelReport:
    towers: Dict[Hashable, RokhlinTower] = {}
    for i, subgroup in cover.subgroups:
        index = subgroup.index()
        if index is not None and n * index > max_modulus:
            raise ConfigError(f"[N={n}] tower modulus {n * index} exceeds max_modulus {max_modulus}")
        towers[i] = build_tower(subgroup, n)
    partition = EquivariantPartition.of(towers)
    if partition.modulus() > max_modulus:
        # phi_delta enumerates residues modulo the lcm across the labels of a tuple
        raise ConfigError(
            f"[N={n}] partition modulus {partition.modulus()} exceeds max_modulus {max_modulus}"
        )

    delta = measured_delta(towers, estimate_F)
    delta_cover = measured_delta(towers, cover_F)
    estimate, image = certify_estimate(partition, z, delta, estimate_F, cover.subgroup_map())

    factorial = math.factorial(z.arity + 1)
    l1_z = l1_norm(z)
    bound = factorial * delta * l1_z * FILLING_FACTOR

    sigma0 = default_sigma0(cover.dim, partition.labels())
    eta_norm = param_l1_norm(apply_chain_map(image, lambda c: eta(c, sigma0)))
    if eta_norm > factorial * estimate.essn:
        raise EstimateViolationError(
            f"[N={n}] |η|_1 = {eta_norm} exceeds (n+1)!·essn = {factorial * estimate.essn}",
            measured=eta_norm, bound=factorial * estimate.essn,
        )
    if eta_norm > bound:
        raise EstimateViolationError(
            f"[N={n}] |η|_1 = {eta_norm} exceeds certified bound {bound}", measured=eta_norm, bound=bound,
        )

    logger.info(
        f"[N={n}] delta={delta} essn={estimate.essn} bound={bound} "
        f"eta_norm={eta_norm} delta_cover={delta_cover}"
    )
    return LevelReport(
        level=n,
        delta=delta,
        l1_z=l1_z,
        essn=estimate.essn,
        bound=bound,
        eta_norm=eta_norm,
        delta_cover=delta_cover,
        towers_verified=True,
    )


# ═══════════════════════════════════════════════════════════════════════
# FULL RUN
# ═══════════════════════════════════════════════════════════════════════

def _halving(levels: List[LevelReport]) -> bool:
    doubled = [(a, b) for a, b in zip(levels, levels[1:]) if b.level == 2 * a.level]
    return bool(doubled) and all(2 * b.bound == a.bound for a, b in doubled)


def run_pipeline(config: PipelineConfig, settings: Optional[Settings] = None) -> PipelineReport:
    """Certified bounds (n+1)!·δ(N)·|z′|_1 over the configured levels.

    Raises:
        ConfigError: no levels, bad levels, missing cycle data, not a cycle.
        ColouringError: a tuple of z′ has no colouring witness for derived F.
        TowerVerificationError / EstimateViolationError: a level failed.
    """
    settings = settings or get_settings()
    levels = list(config.levels)
    _validate_levels(levels)

    source, z, cover = resolve_cycle(config)
    if z.arity is None or z.arity < 1:
        raise ConfigError(f"{source}: the cycle must have arity >= 1")
    if not is_coinvariant_cycle(z):
        raise ConfigError(f"{source}: the chain is not a cycle in coinvariants")

    subgroups = cover.subgroup_map()
    cover_F = derive_F(cover)
    colouring = check_colouring_cycle(z, cover_F, subgroups)
    if not colouring.passed:
        offending = next(e for e in sorted(z, key=repr) if colouring_satisfied(e, cover_F, subgroups) is None)
        raise ColouringError(f"{source}: tuple {offending!r} has no colouring witness", offending=offending)

    estimate_F = witness_F(z, cover_F, subgroups) if config.f_mode == "witness" else cover_F
    factorial = math.factorial(z.arity + 1)
    logger.info(
        f"{source}: |z|_1={l1_norm(z)} levels={levels} f_mode={config.f_mode} |F|={len(estimate_F)}"
    )
    logger.info(f"filling factor ‖ψ‖ <= {FILLING_FACTOR} applied to every bound")

    def level(n: int) -> LevelReport:
        return run_level(n, z, cover, estimate_F, cover_F, settings.max_modulus)

    if settings.threads > 0:
        with ThreadPoolExecutor(max_workers=min(settings.threads, len(levels))) as pool:
            futures = {n: pool.submit(level, n) for n in levels}
            reports = [futures[n].result() for n in levels]
    else:
        reports = [level(n) for n in levels]

    bounds = [r.bound for r in reports]
    decreasing = len(bounds) >= 2 and all(b < a for a, b in zip(bounds, bounds[1:]))
    halving = _halving(reports)
    conclusion = DECAY_CONCLUSION if decreasing else NO_DECAY_CONCLUSION
    logger.info(f"{source}: decreasing={decreasing} halving={halving} | {conclusion}")

    return PipelineReport(
        source=source,
        dim=cover.dim,
        f_mode=config.f_mode,
        factorial=factorial,
        filling_factor=FILLING_FACTOR,
        levels=reports,
        decreasing=decreasing,
        halving=halving,
        conclusion=conclusion,
    )


# ═══════════════════════════════════════════════════════════════════════
# REPORT FILES
# ═══════════════════════════════════════════════════════════════════════

def report_paths(config: PipelineConfig, settings: Optional[Settings] = None) -> Tuple[Path, Path]:
    settings = settings or get_settings()
    csv_path = config.output.csv or settings.report_dir / "levels.csv"
    json_path = config.output.json_path or settings.report_dir / "summary.json"
    return Path(csv_path), Path(json_path)


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def render_csv(report: PipelineReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for level in report.levels:
        writer.writerow(level.csv_row())
    return buffer.getvalue()


def write_report(report: PipelineReport, csv_path: Path, json_path: Path) -> None:
    """CSV rows (level,delta,l1_z,essn,bound) and the JSON summary, each replaced atomically."""
    _write_atomic(Path(csv_path), render_csv(report))
    _write_atomic(Path(json_path), dump_json(report) + "\n")
    logger.info(f"report written: {csv_path} | {json_path}")

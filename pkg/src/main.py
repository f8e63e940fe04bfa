"""
main.py — Command-Line Entry Point
====================================

Each construction is drivable on its own from the command line:

    tower build   --basis 1,0;0,1 --level N     → tower description (JSON)
    tower verify  --basis … --level N --generators 1;-1 --delta 1/2
    phi apply     --chain z.json --level N [--cover cover.toml] [--estimate]
    cycle torus   --dim n [--check]
    pipeline run  --config run.toml [--csv levels.csv] [--json summary.json]
    selftest      --seed k [--inject-fault]

Key guarantees:
    - stdout carries only JSON; logs go to stderr.
    - Exit code 0 iff every verification passed. Any library error
      (RokhlinError) is logged and turns into exit code 1.

Bases are written column by column: columns separated by ';', entries by
','. Generator sets use the same format, one element per ';'-group.
"""

import logging
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import click
from pydantic import ValidationError

from src.chain_complex import Chain
from src.cover_cycles import (
    CoverSpec,
    check_colouring_cycle,
    cover_from_model,
    derive_F,
    torus_cover,
    torus_cycle,
)
from src.errors import ConfigError, RokhlinError
from src.group_lattice import FiniteGenSet, Sublattice
from src.models import ChainModel, CoverSpecModel, dump_json, parse_rational
from src.param_chains import to_model
from src.pipeline import load_chain, load_config, measured_delta, report_paths, run_pipeline, write_report
from src.rokhlin_map import essn_bound_report, phi_delta_chain, witness_F
from src.rokhlin_tower import EquivariantPartition, build_tower, verify_tower
from src.selftest import verify_suite
from src.settings import get_settings

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# ── Option parsing ────────────────────────────────────────────────────

def _parse_vectors(text: str) -> List[Tuple[int, ...]]:
    groups = [g.strip() for g in text.split(";") if g.strip()]
    if not groups:
        raise click.BadParameter("expected at least one vector")
    try:
        return [tuple(int(v) for v in g.split(",")) for g in groups]
    except ValueError:
        raise click.BadParameter(f"cannot read integer vectors from {text!r}") from None


def _basis_option(ctx, param, value: str) -> Sublattice:
    try:
        return Sublattice.from_columns(_parse_vectors(value))
    except (RokhlinError, ValueError) as exc:
        raise click.BadParameter(str(exc)) from exc


def _generators_option(ctx, param, value: str) -> FiniteGenSet:
    try:
        return FiniteGenSet.of(*_parse_vectors(value))
    except RokhlinError as exc:
        raise click.BadParameter(str(exc)) from exc


def _rational_option(ctx, param, value: Optional[str]) -> Optional[Fraction]:
    if value is None:
        return None
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(str(exc)) from exc


def _load_cover(path: Optional[Path], dim: int) -> CoverSpec:
    if path is None:
        return torus_cover(dim)
    try:
        with Path(path).open("rb") as fh:
            data = tomllib.load(fh)
        model = CoverSpecModel.model_validate(data.get("cover", data))
    except (OSError, tomllib.TOMLDecodeError, ValidationError) as exc:
        raise ConfigError(f"cannot read cover from {path}: {exc}") from exc
    return cover_from_model(model)


# ── CLI groups ────────────────────────────────────────────────────────

class _Cli(click.Group):
    """Turns library errors into a logged message and exit code 1."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except RokhlinError as exc:
            logger.error(f"{type(exc).__name__}: {exc}", exc_info=logger.isEnabledFor(logging.DEBUG))
            ctx.exit(1)


@click.group(cls=_Cli)
@click.option("--log-level", default=None, help="Overrides ROKHLIN_LOG_LEVEL.")
def cli(log_level: Optional[str]) -> None:
    """Exact Rokhlin towers, Rokhlin chain maps and certified vanishing bounds."""
    level = (log_level or get_settings().log_level).upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


@cli.group()
def tower() -> None:
    """Build and verify exact Rokhlin towers."""


@tower.command("build")
@click.option("--basis", required=True, callback=_basis_option, help="Subgroup basis columns, e.g. '2,0;0,1'.")
@click.option("--level", type=click.IntRange(min=1), required=True, help="Box side N.")
def tower_build(basis: Sublattice, level: int) -> None:
    click.echo(dump_json(build_tower(basis, level).describe()))


@tower.command("verify")
@click.option("--basis", required=True, callback=_basis_option)
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--generators", required=True, callback=_generators_option, help="F, e.g. '1;-1'.")
@click.option("--delta", required=True, callback=_rational_option, help="Tolerance as 'p/q'.")
@click.pass_context
def tower_verify(ctx: click.Context, basis: Sublattice, level: int, generators: FiniteGenSet, delta: Fraction) -> None:
    report = verify_tower(build_tower(basis, level), generators, delta)
    click.echo(dump_json(report))
    if not report.passed:
        ctx.exit(1)


@cli.group()
def phi() -> None:
    """Apply the Rokhlin chain map."""


@phi.command("apply")
@click.option("--chain", "chain_path", type=click.Path(path_type=Path), required=True, help="Chain JSON over E.")
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--cover", "cover_path", type=click.Path(path_type=Path), default=None, help="TOML with a [cover] table.")
@click.option("--estimate", is_flag=True, help="Print the essn bound report instead of the image.")
def phi_apply(chain_path: Path, level: int, cover_path: Optional[Path], estimate: bool) -> None:
    z = load_chain(chain_path)
    if not z:
        raise ConfigError(f"chain file {chain_path} holds the zero chain")
    dim = next(iter(z))[0].group_part.dim
    cover = _load_cover(cover_path, dim)
    towers = {i: build_tower(subgroup, level) for i, subgroup in cover.subgroups}
    partition = EquivariantPartition.of(towers)
    if not estimate:
        click.echo(dump_json(to_model(phi_delta_chain(partition, z))))
        return
    generators = witness_F(z, derive_F(cover), cover.subgroup_map())
    delta = measured_delta(towers, generators)
    click.echo(dump_json(essn_bound_report(partition, z, delta, generators, cover.subgroup_map())))


@cli.group()
def cycle() -> None:
    """Generate fundamental cycles."""


@cycle.command("torus")
@click.option("--dim", "n", type=int, required=True, help="Torus dimension, 1 <= n <= 3.")
@click.option("--check", is_flag=True, help="Print the colouring report for the torus cover instead.")
@click.pass_context
def cycle_torus(ctx: click.Context, n: int, check: bool) -> None:
    z: Chain = torus_cycle(n)
    if not check:
        click.echo(dump_json(ChainModel.from_domain(z)))
        return
    cover = torus_cover(n)
    report = check_colouring_cycle(z, derive_F(cover), cover.subgroup_map())
    click.echo(dump_json(report))
    if not report.passed:
        ctx.exit(1)


@cli.group()
def pipeline() -> None:
    """Run the certified-bound sweep."""


@pipeline.command("run")
@click.option("--config", "config_path", type=click.Path(path_type=Path), required=True)
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None)
@click.option("--json", "json_path", type=click.Path(path_type=Path), default=None)
def pipeline_run(config_path: Path, csv_path: Optional[Path], json_path: Optional[Path]) -> None:
    config = load_config(config_path)
    report = run_pipeline(config)
    default_csv, default_json = report_paths(config)
    write_report(report, csv_path or default_csv, json_path or default_json)
    click.echo(dump_json(report))


@cli.command("selftest")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--inject-fault", is_flag=True, help="Add a tower with overlapping bases.")
@click.pass_context
def selftest(ctx: click.Context, seed: int, inject_fault: bool) -> None:
    report = verify_suite(seed, inject_fault=inject_fault)
    click.echo(dump_json(report))
    if not report.passed:
        ctx.exit(1)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()

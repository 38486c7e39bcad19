"""Command-line interface.

Subcommands: ``optimize`` (sequential/baseline optimization runs),
``design generate|augment|evaluate`` (uniform-design construction),
``bench list|eval`` (builtin objectives), and ``compare`` (rank table over
several experiment configs).  Exit codes: 0 success, 2 configuration error,
3 external-objective protocol error.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

import click
import numpy as np

from . import benchmarks
from .augud import AugudConfig, construct_ud, run_augud
from .design import DesignError, UTypeDesign, to_unit
from .harness import (
    ConfigError,
    ExperimentConfig,
    ExternalObjectiveSpec,
    ObjectiveProtocolError,
    compare_methods,
    comparison_csv,
    run_experiment,
)
from .space import SearchSpace, SpaceError

EXIT_CONFIG = 2
EXIT_PROTOCOL = 3

log = logging.getLogger("sequd_opt")


def _setup_logging() -> None:
    level = os.environ.get("SEQUD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


@click.group()
def cli():
    """Uniform-design construction and sequential uniform-design optimization."""
    _setup_logging()


# -- design ------------------------------------------------------------------


@cli.group()
def design():
    """Construct and evaluate U-type designs."""


def _emit_design(result, fmt: str, output: str | None) -> None:
    text = result.design.to_json() if fmt == "json" else result.design.to_csv()
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))
    click.echo(f"cd2={result.combined_cd2:.17g}", err=False)


@design.command()
@click.option("--runs", "-n", type=int, required=True)
@click.option("--factors", "-s", type=int, required=True)
@click.option("--levels", "-q", type=int, required=True)
@click.option("--seed", type=int, default=None)
@click.option("--restarts", type=int, default=1)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", "-o", type=click.Path(), default=None)
def generate(runs, factors, levels, seed, restarts, fmt, output):
    """Construct a uniform design U_runs(levels^factors)."""
    try:
        cfg = AugudConfig(seed=seed, restarts=restarts)
        result = construct_ud(runs, factors, levels, cfg)
    except (DesignError, ValueError) as exc:
        raise click.exceptions.Exit(EXIT_CONFIG) from _report(exc)
    _emit_design(result, fmt, output)


@design.command()
@click.option("--fixed", type=click.Path(exists=True), required=True,
              help="Existing design (CSV of integer levels, or JSON).")
@click.option("--add", "n2", type=int, required=True)
@click.option("--levels", "-q", type=int, required=True)
@click.option("--seed", type=int, default=None)
@click.option("--restarts", type=int, default=1)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", "-o", type=click.Path(), default=None)
def augment(fixed, n2, levels, seed, restarts, fmt, output):
    """Augment an existing design with new runs minimizing combined CD2."""
    try:
        fixed_design = _load_design(fixed, levels)
        cfg = AugudConfig(seed=seed, restarts=restarts)
        result = run_augud(fixed_design, n2, fixed_design.s, levels, cfg)
    except (DesignError, ValueError, json.JSONDecodeError) as exc:
        raise click.exceptions.Exit(EXIT_CONFIG) from _report(exc)
    _emit_design(result, fmt, output)


@design.command()
@click.option("--file", "path", type=click.Path(exists=True), required=True)
@click.option("--levels", "-q", type=int, required=True)
def evaluate(path, levels):
    """Print the CD2 of a stored design."""
    try:
        d = _load_design(path, levels)
    except (DesignError, ValueError, json.JSONDecodeError) as exc:
        raise click.exceptions.Exit(EXIT_CONFIG) from _report(exc)
    from .design import cd2

    click.echo(f"cd2={cd2(to_unit(d)):.17g}")


def _load_design(path: str, q: int) -> UTypeDesign:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return UTypeDesign.from_json(text, check_balance=False)
    return UTypeDesign.from_csv(text, q, check_balance=False)


# -- bench -------------------------------------------------------------------


@cli.group()
def bench():
    """Builtin synthetic objectives."""


@bench.command("list")
def bench_list():
    """Name, dimension, domain, and known optimum of each objective."""
    for name in benchmarks.names():
        fn = benchmarks.lookup(name)
        opt = "" if fn.optimum_value is None else f" optimum={fn.optimum_value:.9g}"
        domain = ";".join(f"[{lo:g},{hi:g}]" for lo, hi in fn.domain)
        click.echo(f"{name} dim={fn.dimension} domain={domain} "
                   f"direction={fn.direction}{opt}")


@bench.command("eval")
@click.option("--name", required=True)
@click.option("--point", required=True, help="Comma-separated coordinates.")
def bench_eval(name, point):
    """Evaluate a builtin objective at a point (17 significant digits)."""
    try:
        fn = benchmarks.lookup(name)
        x = np.array([float(v) for v in point.split(",")])
        if x.shape[0] != fn.dimension:
            raise ValueError(
                f"{name} expects {fn.dimension} coordinates, got {x.shape[0]}"
            )
    except (KeyError, ValueError) as exc:
        raise click.exceptions.Exit(EXIT_CONFIG) from _report(exc)
    click.echo(f"{fn(x):.17g}")


# -- optimize / compare --------------------------------------------------------


def _config_from_file(path: str | None, overrides: dict) -> ExperimentConfig:
    data = {}
    if path:
        with open(path) as fh:
            data = json.load(fh)
    data.update({k: v for k, v in overrides.items() if v is not None})
    objective = data.get("objective")
    if objective is None:
        raise ConfigError("an objective is required (builtin name or command)")
    if isinstance(objective, (list, tuple)):
        objective = ExternalObjectiveSpec(
            command=tuple(objective), timeout=float(data.get("timeout", 60.0))
        )
    space = None
    if data.get("space"):
        sp = data["space"]
        space = (
            SearchSpace.from_file(sp)
            if isinstance(sp, str)
            else SearchSpace.from_json(json.dumps(sp))
        )
    augud_cfg = AugudConfig(**data.get("augud", {}))
    return ExperimentConfig(
        method=data.get("method", "sequd"),
        objective=objective,
        t_max=int(data.get("budget", data.get("t_max", 100))),
        space=space,
        direction=data.get("direction"),
        repetitions=int(data.get("reps", data.get("repetitions", 1))),
        seed=int(data.get("seed", 0)),
        parallelism=int(data.get("parallelism", 1)),
        n_per_stage=data.get("n_per_stage"),
        q_levels=data.get("q_levels"),
        augud=augud_cfg,
        out_dir=data.get("out", data.get("out_dir")),
    )


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--method", type=str, default=None)
@click.option("--objective", type=str, default=None, help="Builtin objective name.")
@click.option("--budget", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--reps", type=int, default=None)
@click.option("--parallelism", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
def optimize(config_path, method, objective, budget, seed, reps, parallelism, out):
    """Run an optimization experiment (CLI flags override config fields)."""
    overrides = dict(
        method=method, objective=objective, budget=budget, seed=seed,
        reps=reps, parallelism=parallelism, out=out,
    )
    try:
        cfg = _config_from_file(config_path, overrides)
        summary = run_experiment(cfg)
    except (ConfigError, SpaceError, DesignError, ValueError, KeyError) as exc:
        raise click.exceptions.Exit(EXIT_CONFIG) from _report(exc)
    except ObjectiveProtocolError as exc:
        raise click.exceptions.Exit(EXIT_PROTOCOL) from _report(exc)
    click.echo(json.dumps(summary, indent=2, default=str))


@cli.command()
@click.option("--configs", "config_paths", type=click.Path(exists=True),
              multiple=True, required=True)
@click.option("--out", type=click.Path(), default=None)
def compare(config_paths, out):
    """Rank several experiment configs sharing objective and budget."""
    try:
        cfgs = [_config_from_file(p, {}) for p in config_paths]
        table = compare_methods(cfgs)
    except (ConfigError, SpaceError, ValueError, KeyError) as exc:
        raise click.exceptions.Exit(EXIT_CONFIG) from _report(exc)
    except ObjectiveProtocolError as exc:
        raise click.exceptions.Exit(EXIT_PROTOCOL) from _report(exc)
    text = comparison_csv(table)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _report(exc: Exception) -> Exception:
    click.echo(f"error: {exc}", err=True)
    log.debug("failure detail", exc_info=exc)
    return exc


def main():
    cli(standalone_mode=True)


if __name__ == "__main__":
    main()

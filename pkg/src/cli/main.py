"""
Command-line interface

    fridge steady   --config point.json
    fridge sweep    --config point.json --variable T_H --from 18 --to 40 --steps 200
    fridge figure   fig4 --format json --out data/fig4.json
    fridge crossings --figure fig3
    fridge selftest

Data goes to stdout (or --out); logs go to stderr. Exit codes: 0 success,
1 invalid parameters or configuration, 2 numerical failure, 3 output error.
"""
import functools
import sys
from typing import Callable, List, Optional, Tuple

import click
import orjson
from pandera.errors import SchemaError

from src.diagnostics.selftest import run_selftest
from src.refrigerator.config import load_config
from src.refrigerator.model import ModelParams
from src.refrigerator.thermo import analyze
from src.shared.exceptions import ConfigError, RefrigeratorError
from src.shared.logging import get_logger, setup_logging
from src.shared.settings import get_settings
from src.sweeps.crossings import OBSERVABLES, find_zero_crossing
from src.sweeps.emitter import emit, emit_report, write_bytes
from src.sweeps.runner import run_sweep
from src.sweeps.spec import (
    COLUMN_LABELS,
    FIGURE_PRESETS,
    SweepSpec,
    default_range,
    get_preset,
)

logger = get_logger(__name__)

NUMERICAL_EXIT_CODE = 2


def parse_g_list(value: Optional[str]) -> Tuple[float, ...]:
    """'0.001,0.1,0.2' -> (0.001, 0.1, 0.2); values are multiples of omega_H"""
    if not value:
        return ()
    try:
        values = tuple(float(item) for item in value.split(",") if item.strip())
    except ValueError as e:
        raise ConfigError(f"--g-list must be comma-separated numbers, got '{value}'") from e
    if not values:
        raise ConfigError(f"--g-list names no g values: '{value}'")
    return values


def parse_outputs(value: Optional[str]) -> Optional[Tuple[str, ...]]:
    if not value:
        return None
    return tuple(item.strip() for item in value.split(",") if item.strip())


def handle_errors(command: Callable) -> Callable:
    """Map simulator exceptions onto exit codes"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except RefrigeratorError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)
        except SchemaError as e:
            logger.error(f"Emission check failed: {e}")
            click.echo(f"Error: output failed validation: {e}", err=True)
            sys.exit(NUMERICAL_EXIT_CODE)
        except ValueError as e:
            # pydantic validation of flags (from >= to, unknown columns, ...)
            click.echo(f"Error: {e}", err=True)
            sys.exit(ConfigError.exit_code)

    return wrapper


def load_base(config: Optional[str]) -> ModelParams:
    """Parameters from a config file, or the weak-coupling reference point"""
    if config is None:
        return get_preset("fig1").base
    return load_config(config).to_params()


def write_output(payload: bytes, out: Optional[str]) -> None:
    if out is None:
        click.echo(payload.decode("utf-8"), nl=False)
    else:
        write_bytes(payload, out)


output_options = [
    click.option(
        "--out",
        type=click.Path(dir_okay=False),
        default=None,
        help="Output file (stdout when omitted)",
    ),
    click.option(
        "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True
    ),
]
range_options = [
    click.option("--steps", type=int, default=None, help="Grid points per line"),
    click.option("--from", "start", type=float, default=None, help="Start of the swept range"),
    click.option("--to", "stop", type=float, default=None, help="End of the swept range"),
    click.option(
        "--g-list",
        "g_list",
        type=str,
        default=None,
        help="Comma-separated g values in units of omega_H",
    ),
]


def with_options(options: List[Callable]) -> Callable:
    def decorator(command: Callable) -> Callable:
        for option in reversed(options):
            command = option(command)
        return command

    return decorator


@click.group()
@click.option("--log-level", default=None, help="Override FRIDGE_LOG_LEVEL")
@click.option("--json-logs", is_flag=True, default=False, help="Structured JSON log records")
def cli(log_level: Optional[str], json_logs: bool) -> None:
    """Three-qubit absorption refrigerator simulator"""
    settings = get_settings()
    setup_logging(
        log_level=log_level or settings.log_level,
        log_file=settings.log_file,
        json_logs=json_logs or settings.log_format == "json",
    )


@cli.command()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@handle_errors
def steady(config: Optional[str], out: Optional[str]) -> None:
    """Steady state and thermodynamics of one parameter point (JSON)"""
    report = analyze(load_base(config))
    write_output(emit_report(report), out)


@cli.command()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option(
    "--variable",
    type=click.Choice(["T_H", "g", "T_C", "T_R"]),
    default="T_H",
    show_default=True,
)
@click.option("--outputs", type=str, default=None, help=f"Columns from {', '.join(COLUMN_LABELS)}")
@with_options(range_options + output_options)
@handle_errors
def sweep(
    config: Optional[str],
    variable: str,
    outputs: Optional[str],
    steps: Optional[int],
    start: Optional[float],
    stop: Optional[float],
    g_list: Optional[str],
    out: Optional[str],
    fmt: str,
) -> None:
    """Sweep one parameter and emit the table"""
    base = load_base(config)
    low, high = default_range(base, variable)
    if variable == "g":
        # g range flags are multiples of omega_H, like --g-list
        low = low if start is None else start * base.omega_H
        high = high if stop is None else stop * base.omega_H
    else:
        low = low if start is None else start
        high = high if stop is None else stop
    spec = SweepSpec(
        base=base,
        variable=variable,
        start=low,
        stop=high,
        steps=get_settings().default_steps if steps is None else steps,
        g_values=tuple(f * base.omega_H for f in parse_g_list(g_list)),
        outputs=parse_outputs(outputs),
    )
    result = run_sweep(spec)
    payload = emit(result, fmt)
    write_output(payload, out)


def preset_spec(
    figure_id: str,
    steps: Optional[int],
    start: Optional[float],
    stop: Optional[float],
    g_list: Optional[str],
) -> SweepSpec:
    try:
        preset = get_preset(figure_id)
    except KeyError as e:
        raise ConfigError(str(e.args[0])) from e
    if g_list:
        preset = preset.model_copy(update={"g_fractions": parse_g_list(g_list)})
    return preset.to_spec(steps=steps, start=start, stop=stop)


@cli.command()
@click.argument("figure_id", type=click.Choice(sorted(FIGURE_PRESETS)))
@with_options(range_options + output_options)
@handle_errors
def figure(
    figure_id: str,
    steps: Optional[int],
    start: Optional[float],
    stop: Optional[float],
    g_list: Optional[str],
    out: Optional[str],
    fmt: str,
) -> None:
    """Regenerate the dataset behind one figure"""
    spec = preset_spec(figure_id, steps, start, stop, g_list)
    result = run_sweep(spec)
    write_output(emit(result, fmt), out)


@cli.command()
@click.option("--figure", "figure_id", type=click.Choice(sorted(FIGURE_PRESETS)), default=None)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option(
    "--observable", type=click.Choice(sorted(OBSERVABLES)), default="Qdot_C", show_default=True
)
@with_options(range_options)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@handle_errors
def crossings(
    figure_id: Optional[str],
    config: Optional[str],
    observable: str,
    steps: Optional[int],
    start: Optional[float],
    stop: Optional[float],
    g_list: Optional[str],
    out: Optional[str],
) -> None:
    """Refined sign changes of a heat current along T_H, one list per g line (JSON)"""
    if figure_id is not None:
        spec = preset_spec(figure_id, steps, start, stop, g_list)
    else:
        base = load_base(config)
        low, high = default_range(base, "T_H")
        spec = SweepSpec(
            base=base,
            variable="T_H",
            start=low if start is None else start,
            stop=high if stop is None else stop,
            steps=get_settings().default_steps if steps is None else steps,
            g_values=tuple(f * base.omega_H for f in parse_g_list(g_list)),
        )
    found = find_zero_crossing(spec, observable=observable)
    document = [
        {
            "g": params.g,
            "observable": observable,
            "roots": [c.value for c in found if c.g == params.g],
        }
        for params in spec.lines
    ]
    payload = orjson.dumps(document, option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)
    write_output(payload, out)


@cli.command()
@click.option(
    "--draws",
    type=int,
    default=100,
    show_default=True,
    help="Random draws for the rate-matrix oracle",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--skip-evolution", is_flag=True, default=False, help="Skip the time-evolution oracle"
)
@handle_errors
def selftest(draws: int, seed: int, skip_evolution: bool) -> None:
    """Run the invariant suite; exits 2 when any check fails"""
    report = run_selftest(draws=draws, seed=seed, include_evolution=not skip_evolution)
    for result in report.results:
        click.echo(f"{'PASS' if result.passed else 'FAIL'}  {result.name}  {result.detail}")
    if not report.passed:
        sys.exit(NUMERICAL_EXIT_CODE)


if __name__ == "__main__":
    cli()

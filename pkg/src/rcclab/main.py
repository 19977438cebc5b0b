"""Main CLI interface for rcclab."""

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
from loguru import logger
from pydantic import ValidationError

from rcclab.application.acceptance import AcceptanceSuite, CheckResult
from rcclab.application.analysis_app import AnalysisApplication
from rcclab.domain.errors import BoundExceededError, RccLabError
from rcclab.domain.models.config import AnalysisConfig
from rcclab.domain.services import gf_linalg
from rcclab.domain.services.catalog import catalog_from_spec
from rcclab.domain.services.constructions import (
    construct_Go,
    construct_many_prime,
    construct_sg120_8,
)
from rcclab.domain.services.report_sink import NullReportSink, ReportSink
from rcclab.infrastructure.logging.report_logger import FileReportLogger
from rcclab.infrastructure.logging.setup import setup_logging
from rcclab.infrastructure.persistence.codecs import (
    dumps,
    frobenius_to_json,
    group_to_json,
    instance_to_json,
    matrix_from_json,
    poly_from_json,
    poly_to_json,
    read_json,
)
from rcclab.infrastructure.persistence.config import (
    FileConfigLoader,
    InvalidFileFormatError,
    InvalidJsonConfigError,
    apply_environment,
)

EXIT_VERDICT_FAILURE = 1
EXIT_INPUT_ERROR = 2


@dataclass
class CliState:
    config: AnalysisConfig
    pretty: bool
    log_file: str | None

    def sink(self, source: str) -> ReportSink:
        if self.log_file is None:
            return NullReportSink()
        return FileReportLogger(self.log_file, source)

    def emit(self, data: Any) -> None:
        click.echo(dumps(data, pretty=self.pretty))


@contextmanager
def input_errors() -> Iterator[None]:
    """Turn decoding, validation and bound errors into exit code 2."""
    try:
        yield
    except BoundExceededError as e:
        logger.error(f"Bound '{e.bound}' exceeded: {e.actual} > {e.limit}")
        raise click.exceptions.Exit(EXIT_INPUT_ERROR) from e
    except RccLabError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        raise click.exceptions.Exit(EXIT_INPUT_ERROR) from e
    except ValidationError as e:
        logger.error(f"Invalid input:\n{e}")
        raise click.exceptions.Exit(EXIT_INPUT_ERROR) from e


def load_config(config_path: Path | None) -> AnalysisConfig:
    """Load configuration from the specified path, then apply RCCLAB_MAX_ORDER."""
    try:
        config = (
            FileConfigLoader().load_config(config_path=config_path)
            if config_path is not None
            else AnalysisConfig()
        )
        return apply_environment(config)
    except (InvalidJsonConfigError, InvalidFileFormatError) as e:
        logger.error(f"Failed to load configuration from {config_path}: {e.message}")
        raise click.exceptions.Exit(EXIT_INPUT_ERROR) from e
    except (FileNotFoundError, ValueError) as e:
        logger.error(f"Failed to load configuration from {config_path}: {e}")
        raise click.exceptions.Exit(EXIT_INPUT_ERROR) from e


def _int_list(text: str, name: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got '{text}'", param_hint=name) from e


@click.group()
@click.option(
    "--config",
    "-c",
    type=click.Path(exists=True, path_type=Path),
    help="Path to configuration file (YAML or JSON) with analysis bounds",
)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.option(
    "--log-file",
    type=str,
    help="Append every analysed automorphism to this file as pretty-printed JSON",
)
@click.option("--debug-log", type=str, help="Write full diagnostic logging to this file")
@click.option("--pretty", is_flag=True, help="Indent JSON output for humans")
@click.option("--seed", type=int, help="Seed for every randomized procedure")
@click.pass_context
def main(
    ctx: click.Context,
    config: Path | None,
    verbose: bool,
    log_file: str | None,
    debug_log: str | None,
    pretty: bool,
    seed: int | None,
) -> None:
    """rcclab - regular cycles of finite group automorphisms."""
    setup_logging(verbose, debug_log)
    app_config = load_config(config)
    if seed is not None:
        app_config = app_config.with_seed(seed)
    ctx.obj = CliState(config=app_config, pretty=pretty, log_file=log_file)


@main.command()
@click.argument("group_file", type=str)
@click.option(
    "--all-certificates", is_flag=True, help="List every applicable fast-path certificate"
)
@click.pass_obj
def analyze(state: CliState, group_file: str, all_certificates: bool) -> None:
    """Enumerate Aut(G) for a group file ('-' for stdin) and report the RCC verdicts."""
    with input_errors():
        data = read_json(group_file)
        app = AnalysisApplication(state.config, state.sink(group_file), all_certificates)
        report = app.analyze(data, source=group_file)
    state.emit(report.model_dump(mode="json", by_alias=True))


@main.command("check-rcc")
@click.argument("group_file", type=str)
@click.option("--aut", "aut_file", type=str, required=True, help="Automorphism JSON file")
@click.pass_obj
def check_rcc(state: CliState, group_file: str, aut_file: str) -> None:
    """Decide the RCC for one automorphism of a group."""
    with input_errors():
        app = AnalysisApplication(state.config, state.sink(aut_file), all_certificates=True)
        record = app.check(read_json(group_file), read_json(aut_file))
    state.emit(record.model_dump(mode="json", by_alias=True))


@main.group()
def construct() -> None:
    """Build groups with a packaged automorphism, or catalog groups."""


@construct.command("g-o")
@click.option("--primes", required=True, help="Three increasing primes, e.g. 3,5,7")
@click.option("--exps", default="1,1,1", show_default=True, help="Exponents of the primes")
@click.pass_obj
def construct_g_o(state: CliState, primes: str, exps: str) -> None:
    """The group G_o of order 4 f(o) with a non-RCC automorphism of order o."""
    prime_list, exponents = _int_list(primes, "--primes"), _int_list(exps, "--exps")
    with input_errors():
        instance = construct_Go(prime_list, exponents, state.config)
    state.emit(instance_to_json(instance))


@construct.command("many-prime")
@click.option("--order", "order", type=int, required=True, help="Automorphism order o")
@click.pass_obj
def construct_many(state: CliState, order: int) -> None:
    """A non-RCC automorphism of order o, for o with three or more prime divisors."""
    with input_errors():
        instance = construct_many_prime(order, state.config)
    state.emit(instance_to_json(instance))


@construct.command("sg120-8")
@click.pass_obj
def construct_sg120(state: CliState) -> None:
    """The smallest group with a non-RCC automorphism, and that automorphism."""
    with input_errors():
        instance = construct_sg120_8(state.config)
    state.emit(instance_to_json(instance))


@construct.command("catalog")
@click.argument("name", type=str)
@click.pass_obj
def construct_catalog(state: CliState, name: str) -> None:
    """A catalog group, e.g. 'cyclic(6)' or 'abelian([2,2],[3])'."""
    with input_errors():
        group = catalog_from_spec(name, state.config)
    state.emit(group_to_json(group))


@main.command()
@click.argument("matrix_file", type=str)
@click.pass_obj
def frobenius(state: CliState, matrix_file: str) -> None:
    """Frobenius normal form of a matrix over GF(p)."""
    with input_errors():
        matrix = matrix_from_json(read_json(matrix_file))
        decomposition = gf_linalg.frobenius_form(matrix, state.config)
    state.emit(frobenius_to_json(decomposition))


@main.command("poly-order")
@click.argument("poly_file", type=str)
@click.pass_obj
def poly_order(state: CliState, poly_file: str) -> None:
    """Multiplicative order of X modulo a monic polynomial over GF(p)."""
    with input_errors():
        poly = poly_from_json(read_json(poly_file))
        order = gf_linalg.poly_order(poly, state.config)
    state.emit({"poly": poly_to_json(poly), "display": str(poly), "order": order})


@main.command("regular-basis")
@click.argument("matrix_file", type=str)
@click.pass_obj
def regular_basis(state: CliState, matrix_file: str) -> None:
    """A basis of vectors whose cycle length under the matrix is its order."""
    with input_errors():
        matrix = matrix_from_json(read_json(matrix_file))
        basis = gf_linalg.regular_basis(matrix, state.config)
        order = gf_linalg.matrix_order(matrix, state.config)
    state.emit({"order": order, "basis": [list(v) for v in basis]})


def _print_table(results: list[CheckResult]) -> None:
    width = max(len(r.name) for r in results)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        click.echo(
            f"{result.name:<{width}}  {status}  {result.duration_seconds:8.2f}s  {result.detail}"
        )


@main.command()
@click.option(
    "--extended",
    is_flag=True,
    envvar="RCCLAB_EXTENDED",
    help="Also enumerate Aut(S_6); can take half an hour",
)
@click.option("--check", "only", multiple=True, help="Run only the named check (repeatable)")
@click.pass_obj
def acceptance(state: CliState, extended: bool, only: tuple[str, ...]) -> None:
    """Run the acceptance suite and print a pass/fail table."""
    suite = AcceptanceSuite(state.config, extended=extended)
    try:
        results = suite.run(list(only) or None)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--check") from e
    _print_table(results)
    if not all(r.passed for r in results):
        raise click.exceptions.Exit(EXIT_VERDICT_FAILURE)


if __name__ == "__main__":
    main()

import json
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Any

import pytest
from click.testing import CliRunner, Result
from loguru import logger

from rcclab.infrastructure.persistence.config import MAX_ORDER_ENV
from rcclab.main import EXIT_INPUT_ERROR, main

Z6 = {"order": 6, "table": [[(a + b) % 6 for b in range(6)] for a in range(6)]}


@pytest.fixture(autouse=True)
def reset_logger() -> Iterator[None]:
    """Each invocation attaches loguru to the runner's stderr, which closes afterwards."""
    yield
    logger.remove()


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def invoke(runner: CliRunner, *args: str, stdin: str | None = None) -> Result:
    return runner.invoke(main, list(args), input=stdin)


def output_json(result: Result) -> Any:
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def test_catalog_group_piped_into_analyze(runner: CliRunner) -> None:
    """
    GIVEN: The cyclic group of order 6 built from the catalog
    WHEN: Its JSON is piped into analyze on stdin
    THEN: Both automorphisms are RCC and the report is tagged with the input source
    """
    group = invoke(runner, "construct", "catalog", "cyclic(6)")

    report = output_json(invoke(runner, "analyze", "-", stdin=group.stdout))

    assert report["input"] == "-"
    assert report["summary"]["rcc_group"] is True
    assert report["summary"]["automorphism_count"] == 2
    assert report["summary"]["exhaustive"] is True
    assert {r["lambda"] for r in report["records"]} == {"1/6", "1/3"}


@pytest.mark.slow
def test_counterexample_piped_into_analyze(
    runner: CliRunner, write_json: Callable[[str, Any], Path]
) -> None:
    """
    GIVEN: The order-120 instance with its packaged automorphism of order 30
    WHEN: analyze reads it from a file
    THEN: The group verdict is negative because of the packaged automorphism
    """
    instance = output_json(invoke(runner, "construct", "sg120-8"))
    path = write_json("sg120_8.json", instance)

    report = output_json(invoke(runner, "analyze", str(path)))

    assert report["summary"]["rcc_group"] is False
    assert report["packaged"]["rcc"] is False
    assert report["packaged"]["zeta"] == {"1": 30, "6": 30, "10": 30, "15": 30}
    assert report["packaged"]["lambda"] == "1/8"


def test_check_rcc_logs_record(
    runner: CliRunner, write_json: Callable[[str, Any], Path], temp_log_file: Path
) -> None:
    group_path = write_json("z6.json", Z6)
    aut_path = write_json("negation.json", {"perm": [0, 5, 4, 3, 2, 1]})

    record = output_json(
        invoke(runner, "--log-file", str(temp_log_file), "check-rcc", str(group_path), "--aut", str(aut_path))
    )

    assert record["rcc"] is True
    assert record["order"] == 2
    assert record["witness"] == 1
    assert len(record["certificates"]) == 3
    logged = json.loads(temp_log_file.read_text(encoding="utf-8"))
    assert logged["input"] == str(aut_path)
    assert logged["lambda"] == "1/3"


def test_construct_g_o(runner: CliRunner) -> None:
    instance = output_json(invoke(runner, "construct", "g-o", "--primes", "2,3,5"))

    assert instance["name"] == "G_30"
    assert instance["group"]["order"] == 240
    assert instance["expected"]["rcc"] is False


def test_poly_order(runner: CliRunner, write_json: Callable[[str, Any], Path]) -> None:
    path = write_json("poly.json", {"p": 2, "coeffs": [1, 1, 1]})

    data = output_json(invoke(runner, "poly-order", str(path)))

    assert data == {"poly": {"p": 2, "coeffs": [1, 1, 1]}, "display": "X^2 + X + 1", "order": 3}


def test_frobenius(runner: CliRunner, write_json: Callable[[str, Any], Path]) -> None:
    path = write_json("identity.json", {"p": 3, "n": 2, "entries": [[1, 0], [0, 1]]})

    data = output_json(invoke(runner, "frobenius", str(path)))

    assert data["display"] == ["X + 2", "X + 2"]
    assert data["basis_change"]["n"] == 2


def test_regular_basis(runner: CliRunner, write_json: Callable[[str, Any], Path]) -> None:
    path = write_json("swap.json", {"p": 2, "n": 2, "entries": [[0, 1], [1, 0]]})

    data = output_json(invoke(runner, "regular-basis", str(path)))

    assert data["order"] == 2
    assert len(data["basis"]) == 2


def test_pretty_output_is_indented(runner: CliRunner) -> None:
    result = invoke(runner, "--pretty", "construct", "catalog", "cyclic(2)")

    assert result.stdout.startswith('{\n  "generators"')


class TestInputErrors:
    def test_malformed_json(self, runner: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text('{"order": 2, "table": [[0, 1], [1, 0]', encoding="utf-8")

        result = invoke(runner, "analyze", str(path))

        assert result.exit_code == EXIT_INPUT_ERROR
        assert "malformed JSON" in result.output
        assert result.stdout == ""

    def test_group_axiom_violation(self, runner: CliRunner) -> None:
        result = invoke(runner, "analyze", "-", stdin=json.dumps({"order": 2, "table": [[0, 1], [0, 1]]}))

        assert result.exit_code == EXIT_INPUT_ERROR
        assert "GroupAxiomError" in result.output

    def test_bound_exceeded(self, runner: CliRunner) -> None:
        result = invoke(runner, "construct", "catalog", "cyclic(10000)")

        assert result.exit_code == EXIT_INPUT_ERROR
        assert "max_group_order" in result.output

    def test_environment_bound(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["construct", "catalog", "cyclic(6)"], env={MAX_ORDER_ENV: "4"})

        assert result.exit_code == EXIT_INPUT_ERROR

    def test_config_file_bound(self, runner: CliRunner, temp_config_file: Path) -> None:
        result = invoke(runner, "--config", str(temp_config_file), "construct", "catalog", "cyclic(1001)")

        assert result.exit_code == EXIT_INPUT_ERROR

    def test_bad_primes(self, runner: CliRunner) -> None:
        result = invoke(runner, "construct", "g-o", "--primes", "2,three,5")

        assert result.exit_code == EXIT_INPUT_ERROR
        assert "comma-separated integers" in result.output

    def test_unsupported_primes(self, runner: CliRunner) -> None:
        result = invoke(runner, "construct", "g-o", "--primes", "2,3")

        assert result.exit_code == EXIT_INPUT_ERROR
        assert "PreconditionError" in result.output


class TestAcceptanceCommand:
    def test_unknown_check(self, runner: CliRunner) -> None:
        result = invoke(runner, "acceptance", "--check", "no_such_check")

        assert result.exit_code == EXIT_INPUT_ERROR
        assert "no_such_check" in result.output

    def test_failure_exit_code(self, runner: CliRunner) -> None:
        result = runner.invoke(
            main, ["acceptance", "--check", "sg120_8_counterexample"], env={MAX_ORDER_ENV: "100"}
        )

        assert result.exit_code == 1
        assert "sg120_8_counterexample  FAIL" in result.stdout

    @pytest.mark.slow
    def test_passing_check(self, runner: CliRunner) -> None:
        result = invoke(runner, "acceptance", "--check", "g_o_family")

        assert result.exit_code == 0, result.output
        assert "g_o_family  PASS" in result.stdout

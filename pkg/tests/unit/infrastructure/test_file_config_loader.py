import json
import tempfile
from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from rcclab.domain.models.config import AnalysisConfig
from rcclab.domain.repositories.config import ConfigLoader
from rcclab.infrastructure.persistence.config import (
    MAX_ORDER_ENV,
    FileConfigLoader,
    InvalidFileFormatError,
    InvalidJsonConfigError,
    apply_environment,
)


def test_file_config_loader_is_a_config_loader(file_config_loader: FileConfigLoader) -> None:
    assert isinstance(file_config_loader, ConfigLoader)


def test_file_config_loader_with_valid_yaml() -> None:
    yaml_content = """
# rcclab.yaml - tighter bounds for a laptop
bounds:
  max_group_order: 2000
  max_aut_order: 500
  frattini_order_bound: 128
  seed: 42
"""
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=True) as fp:
        fp.write(yaml_content)
        fp.flush()
        temp_file = Path(fp.name)

        loader = FileConfigLoader()
        config = loader.load_config(temp_file)

        assert isinstance(config, AnalysisConfig)
        assert config.max_group_order == 2000
        assert config.max_aut_order == 500
        assert config.frattini_order_bound == 128
        assert config.seed == 42
        assert config.max_generators == AnalysisConfig().max_generators


def test_load_valid_yaml_config(
    file_config_loader: FileConfigLoader, temp_config_file: Path
) -> None:
    config = file_config_loader.load_config(temp_config_file)

    assert config.max_group_order == 1000
    assert config.seed == 7


def test_load_valid_json_config_without_bounds_section(
    file_config_loader: FileConfigLoader,
) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".json", delete=True) as fp:
        json.dump({"enumeration_bound": 1024, "iteration_degree_bound": 8}, fp)
        fp.flush()

        config = file_config_loader.load_config(Path(fp.name))

        assert config.enumeration_bound == 1024
        assert config.iteration_degree_bound == 8


def test_load_invalid_json_config(file_config_loader: FileConfigLoader) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".json", delete=True) as fp:
        fp.write('{"bounds": {"max_group_order": 100,}}')
        fp.flush()

        with pytest.raises(InvalidJsonConfigError, match="Invalid JSON configuration"):
            file_config_loader.load_config(Path(fp.name))


def test_file_config_loader_invalid_model_data(file_config_loader: FileConfigLoader) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=True) as fp:
        yaml.dump({"bounds": {"max_group_order": -3}}, fp)
        fp.flush()

        with pytest.raises(ValidationError):
            file_config_loader.load_config(Path(fp.name))


def test_inconsistent_bounds_are_rejected(file_config_loader: FileConfigLoader) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=True) as fp:
        yaml.dump({"bounds": {"max_group_order": 100}}, fp)
        fp.flush()

        with pytest.raises(ValueError, match="max_aut_order"):
            file_config_loader.load_config(Path(fp.name))


def test_unknown_bound_is_rejected(file_config_loader: FileConfigLoader) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=True) as fp:
        yaml.dump({"bounds": {"max_group_size": 100}}, fp)
        fp.flush()

        with pytest.raises(ValueError):
            file_config_loader.load_config(Path(fp.name))


def test_bounds_must_be_a_mapping(file_config_loader: FileConfigLoader) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=True) as fp:
        yaml.dump({"bounds": [1, 2]}, fp)
        fp.flush()

        with pytest.raises(ValueError, match="mapping"):
            file_config_loader.load_config(Path(fp.name))


def test_load_config_file_not_found(file_config_loader: FileConfigLoader) -> None:
    non_existent_path = Path("/non/existent/rcclab.yaml")

    with pytest.raises(FileNotFoundError, match="Configuration file not found"):
        file_config_loader.load_config(non_existent_path)


def test_load_config_unsupported_file_format(file_config_loader: FileConfigLoader) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".toml", delete=True) as fp:
        fp.write("[bounds]\nmax_group_order = 100\n")
        fp.flush()

        with pytest.raises(InvalidFileFormatError, match="Unsupported configuration file format"):
            file_config_loader.load_config(Path(fp.name))


@pytest.mark.parametrize("content", ["", "   \n", "# only a comment\n", "[]\n"])
def test_load_config_empty_file(file_config_loader: FileConfigLoader, content: str) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=True) as fp:
        fp.write(content)
        fp.flush()

        with pytest.raises(ValueError, match="empty"):
            file_config_loader.load_config(Path(fp.name))


class TestEnvironmentOverride:
    def test_unset_keeps_config(self) -> None:
        config = AnalysisConfig(seed=3)

        assert apply_environment(config, {}) is config
        assert apply_environment(config, {MAX_ORDER_ENV: "  "}) is config

    def test_max_order_override(self) -> None:
        config = apply_environment(AnalysisConfig(), {MAX_ORDER_ENV: "64"})

        assert config.max_group_order == 64
        assert config.max_aut_order == 64

    @pytest.mark.parametrize(("raw", "match"), [("lots", "must be an integer"), ("0", "positive")])
    def test_invalid_override(self, raw: str, match: str) -> None:
        with pytest.raises(ValueError, match=match):
            apply_environment(AnalysisConfig(), {MAX_ORDER_ENV: raw})

    def test_reads_process_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(MAX_ORDER_ENV, "128")

        assert apply_environment(AnalysisConfig()).max_group_order == 128

import json
import tempfile
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Any
from unittest.mock import MagicMock

import pytest
import yaml

from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import AnalysisConfig
from rcclab.domain.models.construction import ConstructedInstance
from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.services.analysis import RccAnalysisService
from rcclab.domain.services.catalog import (
    abelian,
    cyclic,
    dihedral,
    quaternion8,
    symmetric,
)
from rcclab.domain.services.constructions import construct_sg120_8
from rcclab.domain.services.group_kernel import validate_group
from rcclab.domain.services.report_sink import ReportSink
from rcclab.infrastructure.persistence.config import FileConfigLoader


@pytest.fixture
def config() -> AnalysisConfig:
    """Fixture providing the default analysis bounds."""
    return AnalysisConfig()


@pytest.fixture
def cyclic6() -> FiniteGroup:
    return cyclic(6)


@pytest.fixture
def klein() -> FiniteGroup:
    return abelian([2, 2])


@pytest.fixture
def klein_identity_last() -> FiniteGroup:
    """Klein four-group with the identity at index 3 and generators 0 and 2."""
    return validate_group(
        [[a ^ b ^ 3 for b in range(4)] for a in range(4)], generators=[0, 2], tag="klein_relabelled"
    )


@pytest.fixture
def s3() -> FiniteGroup:
    return symmetric(3)


@pytest.fixture
def d4() -> FiniteGroup:
    """Dihedral group of order 8."""
    return dihedral(4)


@pytest.fixture
def q8() -> FiniteGroup:
    return quaternion8()


@pytest.fixture
def negation(cyclic6: FiniteGroup) -> Automorphism:
    """x -> -x on Z/6."""
    return Automorphism(group=cyclic6, perm=tuple((-x) % 6 for x in range(6)))


@pytest.fixture(scope="session")
def sg120_8() -> ConstructedInstance:
    """The order-120 counterexample, built once per session."""
    return construct_sg120_8()


@pytest.fixture
def file_config_loader() -> FileConfigLoader:
    return FileConfigLoader()


@pytest.fixture
def mock_sink() -> MagicMock:
    """Fixture providing a mock report sink."""
    sink = MagicMock(spec=ReportSink)
    sink.__enter__.return_value = sink
    return sink


@pytest.fixture
def analysis_service(mock_sink: MagicMock) -> RccAnalysisService:
    return RccAnalysisService(mock_sink)


@pytest.fixture
def temp_config_file() -> Iterator[Path]:
    """Create a temporary YAML configuration file."""
    try:
        with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
            yaml.dump({"bounds": {"max_group_order": 1000, "seed": 7}}, f)
            yield Path(f.name)
    finally:
        Path(f.name).unlink(missing_ok=True)


@pytest.fixture
def temp_log_file() -> Iterator[Path]:
    """Create a temporary record log file."""
    with tempfile.NamedTemporaryFile(mode="w", suffix=".log", delete=False) as f:
        temp_path = Path(f.name)
    yield temp_path
    temp_path.unlink(missing_ok=True)


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], Path]:
    """Write a JSON document into the test's temporary directory."""

    def write(name: str, data: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write

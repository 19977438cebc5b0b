from pathlib import Path
from typing import Protocol, runtime_checkable

from rcclab.domain.models.config import AnalysisConfig


@runtime_checkable
class ConfigLoader(Protocol):
    """Protocol for loading analysis bounds from a file."""

    def load_config(self, config_path: Path) -> AnalysisConfig:
        """Load configuration from the specified path."""

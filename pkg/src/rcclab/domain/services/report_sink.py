from abc import ABC, abstractmethod
from typing import Any, Self

from rcclab.domain.models.report import AutomorphismRecord


class ReportSink(ABC):
    """Abstract destination for per-automorphism analysis records."""

    @abstractmethod
    def log_record(self, record: AutomorphismRecord) -> None:
        """Write a single record."""

    @abstractmethod
    def __enter__(self) -> Self:
        """Open the sink."""

    @abstractmethod
    def __exit__(self, exc_type: Any, exc_value: Any, traceback: Any) -> None:
        """Close the sink."""


class NullReportSink(ReportSink):
    """Discards every record."""

    def log_record(self, record: AutomorphismRecord) -> None:
        pass

    def __enter__(self) -> Self:
        return self

    def __exit__(self, exc_type: Any, exc_value: Any, traceback: Any) -> None:
        pass

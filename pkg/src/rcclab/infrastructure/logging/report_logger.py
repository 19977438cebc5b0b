"""Per-automorphism record log."""

import json
import os
from pathlib import Path
from typing import Any, Self

from loguru import logger

from rcclab.domain.models.report import AutomorphismRecord
from rcclab.domain.services.report_sink import ReportSink


class FileReportLogger(ReportSink):
    """Appends each analysed automorphism to a file as pretty-printed JSON."""

    def __init__(self, log_file_path: str, source: str = "") -> None:
        self._log_file_path = Path(log_file_path)
        self._source = source
        self._handle: Any = None

    def __enter__(self) -> Self:
        self._handle = self._log_file_path.open("a", encoding="utf-8")
        logger.debug(f"Writing automorphism records to {self._log_file_path}")
        return self

    def __exit__(self, exc_type: Any, exc_value: Any, traceback: Any) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def log_record(self, record: AutomorphismRecord) -> None:
        if self._handle is None:
            raise RuntimeError("Report logger not opened. Use it as a context manager.")

        entry = record.model_dump(mode="json", by_alias=True)
        entry["input"] = self._source
        pretty_json = json.dumps(entry, indent=2, ensure_ascii=False, sort_keys=True)

        self._handle.write(pretty_json + "\n")
        self._handle.flush()
        os.fsync(self._handle.fileno())

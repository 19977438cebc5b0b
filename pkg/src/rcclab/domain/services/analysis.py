from collections.abc import Iterable, Iterator

from loguru import logger

from rcclab.domain.errors import InvariantViolationError, RccLabError
from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.report import AutomorphismRecord
from rcclab.domain.services.automorphisms import cycle_structure
from rcclab.domain.services.rcc import (
    applicable_certificates,
    check_rcc,
    lambda_value,
)
from rcclab.domain.services.report_sink import ReportSink


class RccAnalysisService:
    """Service for analysing automorphisms one by one."""

    def __init__(self, sink: ReportSink, all_certificates: bool = False) -> None:
        self._sink = sink
        self._all_certificates = all_certificates

    def analyse(self, automorphism: Automorphism, index: int = 0) -> AutomorphismRecord:
        verdict = check_rcc(automorphism)
        certificates = applicable_certificates(automorphism)
        if certificates and not verdict.holds:
            raise InvariantViolationError(
                f"certificate {certificates[0].kind} issued for a non-RCC automorphism"
            )
        return AutomorphismRecord(
            index=index,
            order=automorphism.order,
            zeta=cycle_structure(automorphism).counts,
            lambda_value=lambda_value(automorphism),
            rcc=verdict.holds,
            witness=verdict.witness,
            certificate=certificates[0] if certificates else None,
            certificates=certificates if self._all_certificates else None,
        )

    def analyse_all(self, automorphisms: Iterable[Automorphism]) -> Iterator[AutomorphismRecord]:
        """Analyse automorphisms in order and yield their records."""
        for index, automorphism in enumerate(automorphisms):
            try:
                record = self.analyse(automorphism, index)
            except RccLabError as e:
                logger.error(f"Analysis of automorphism {index} failed: {e.message}")
                raise
            self._sink.log_record(record)
            yield record

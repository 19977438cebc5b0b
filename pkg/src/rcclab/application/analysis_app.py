"""Application service behind ``analyze`` and ``check-rcc``."""

import time
from typing import Any

from loguru import logger

from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import AnalysisConfig
from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.models.report import AutomorphismRecord, GroupSummary, Report
from rcclab.domain.services.analysis import RccAnalysisService
from rcclab.domain.services.automorphisms import automorphisms_or_sample
from rcclab.domain.services.group_kernel import fingerprint
from rcclab.domain.services.report_sink import NullReportSink, ReportSink
from rcclab.infrastructure.persistence.codecs import (
    automorphism_from_json,
    group_from_json,
    packaged_automorphism,
)

DEFAULT_SAMPLE_SIZE = 200


class AnalysisApplication:
    """Builds RCC reports for decoded groups and automorphisms."""

    def __init__(
        self,
        config: AnalysisConfig,
        sink: ReportSink | None = None,
        all_certificates: bool = False,
        sample_size: int = DEFAULT_SAMPLE_SIZE,
    ) -> None:
        self._config = config
        self._sink = sink or NullReportSink()
        self._all_certificates = all_certificates
        self._sample_size = sample_size

    def analyze(self, data: Any, source: str = "<input>") -> Report:
        """Analyse every automorphism of the decoded group.

        A constructed instance also gets its packaged automorphism analysed.
        """
        group = group_from_json(data, self._config)
        packaged = packaged_automorphism(data, group, self._config)
        return self.analyze_group(group, source, packaged)

    def analyze_group(
        self, group: FiniteGroup, source: str, packaged: Automorphism | None = None
    ) -> Report:
        logger.info(f"Analysing {group.tag or 'group'} of order {group.order} from {source}")
        start_time = time.perf_counter()
        automorphisms, exhaustive = automorphisms_or_sample(
            group, self._sample_size, self._config
        )

        with self._sink as sink:
            service = RccAnalysisService(sink, self._all_certificates)
            records = list(service.analyse_all(automorphisms))
            packaged_record = None
            if packaged is not None:
                packaged_record = service.analyse(packaged, index=0)
                sink.log_record(packaged_record)

        summary = self._summarize(group, records, exhaustive, packaged_record)
        self._log_summary(summary, time.perf_counter() - start_time)
        return Report(input=source, summary=summary, records=records, packaged=packaged_record)

    def check(self, group_data: Any, automorphism_data: Any) -> AutomorphismRecord:
        """Analyse a single automorphism of the decoded group."""
        group = group_from_json(group_data, self._config)
        automorphism = automorphism_from_json(automorphism_data, group, self._config)
        with self._sink as sink:
            record = RccAnalysisService(sink, self._all_certificates).analyse(automorphism)
            sink.log_record(record)
        self._log_record(record)
        return record

    def _summarize(
        self,
        group: FiniteGroup,
        records: list[AutomorphismRecord],
        exhaustive: bool,
        packaged: AutomorphismRecord | None,
    ) -> GroupSummary:
        verdicts = [r.rcc for r in records] + ([packaged.rcc] if packaged is not None else [])
        return GroupSummary(
            order=group.order,
            tag=group.tag,
            fingerprint=fingerprint(group),
            automorphism_count=len(records),
            exhaustive=exhaustive,
            rcc_group=all(verdicts),
            lambda_group=max((r.lambda_value for r in records), default=None),
            non_rcc_count=sum(not r.rcc for r in records),
            certified_count=sum(r.certificate is not None for r in records),
        )

    def _log_summary(self, summary: GroupSummary, duration: float) -> None:
        scope = "Aut(G)" if summary.exhaustive else "sampled automorphisms"
        verdict = "\033[32mRCC ✓\033[0m" if summary.rcc_group else "\033[31mnot RCC ✗\033[0m"
        logger.info(
            f"{verdict}: {summary.automorphism_count} {scope} analysed in {duration:.2f}s, "
            f"{summary.non_rcc_count} without a regular cycle, "
            f"{summary.certified_count} certified by a fast path"
        )
        if not summary.exhaustive:
            logger.warning("Verdict covers a sample only; Aut(G) enumeration was refused")

    def _log_record(self, record: AutomorphismRecord) -> None:
        if record.rcc:
            logger.info(f"\033[32mRCC ✓\033[0m: order {record.order}, witness {record.witness}")
        else:
            logger.info(
                f"\033[31mnot RCC ✗\033[0m: order {record.order}, "
                f"longest cycle {record.max_length}"
            )

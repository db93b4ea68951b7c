import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .expectations import EXPECTATIONS_VERSION, Expectation, expected_value, lookup

logger = logging.getLogger(__name__)

TOOL_VERSION = '1.0.0'


@dataclass
class CheckResult:
    """One expected-vs-computed comparison; expected None means no oracle exists."""
    claim_id: str
    computed: Any
    expected: Any = None
    provenance: Optional[str] = None
    formula: str = ''
    informational: bool = False

    @classmethod
    def against(cls, claim_id: str, q: int, computed: Any,
                informational: bool = False) -> 'CheckResult':
        expected = expected_value(claim_id, q)
        if expected is None:
            return cls(claim_id, computed, informational=informational)
        entry: Expectation = lookup(claim_id)
        return cls(claim_id, computed, expected, entry.provenance.value,
                   entry.formula, informational)

    @property
    def passed(self) -> bool:
        if self.expected is None or self.informational:
            return True
        return self.computed == self.expected

    @property
    def status(self) -> str:
        if self.informational:
            return 'info'
        return 'pass' if self.passed else 'FAIL'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'claim_id': self.claim_id,
            'expected': self.expected,
            'provenance': self.provenance,
            'formula': self.formula,
            'computed': self.computed,
            'informational': self.informational,
            'pass': self.passed,
            'status': self.status,
        }


@dataclass
class ReportDocument:
    subcommand: str
    field_record: Dict[str, Any]
    config: Dict[str, Any]
    checks: List[CheckResult] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        if not check.passed:
            logger.warning(f"{check.claim_id}: computed {check.computed}, expected {check.expected}")
        return check

    def payload(self) -> Dict[str, Any]:
        """Everything but the timings; identical for identical runs."""
        return {
            'tool_version': self.tool_version,
            'expectations_version': EXPECTATIONS_VERSION,
            'subcommand': self.subcommand,
            'field': self.field_record,
            'config': self.config,
            'checks': [c.to_dict() for c in self.checks],
            'results': self.results,
            'passed': self.passed,
        }

    def to_dict(self) -> Dict[str, Any]:
        document = self.payload()
        document['timings'] = self.timings
        return document

    def render(self, fmt: str) -> str:
        if fmt == 'json':
            return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str) + '\n'
        if fmt == 'csv':
            return self._render_csv()
        if fmt == 'text':
            return self._render_text()
        raise ValueError(f"unknown report format {fmt!r}")

    def _render_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['claim_id', 'provenance', 'expected', 'computed', 'status'])
        for c in self.checks:
            writer.writerow([c.claim_id, c.provenance or '', _cell(c.expected),
                             _cell(c.computed), c.status])
        return buffer.getvalue()

    def _render_text(self) -> str:
        record = self.field_record
        lines = [
            f"{self.subcommand} at q={record.get('q')} (m={record.get('m')}, "
            f"poly {record.get('reduction_poly')}), tool {self.tool_version}",
        ]
        for c in self.checks:
            tag = f" [{c.provenance}]" if c.provenance else ''
            lines.append(f"  {c.status:4}  {c.claim_id}: computed {_cell(c.computed)}, "
                         f"expected {_cell(c.expected)}{tag}")
        for key, value in sorted(self.results.items()):
            lines.append(f"  {key}: {_cell(value)}")
        lines.append(f"  overall: {'pass' if self.passed else 'FAIL'}")
        return '\n'.join(lines) + '\n'


def _cell(value: Any) -> str:
    if value is None:
        return '-'
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, default=str)
    return str(value)

"""Trace files: one event per row, floats written with 17 significant digits.

Traces are read back row by row through a pydantic row model; a row that
fails validation is reported with its sheet row number. The XLSX export
carries the same columns for plotting.
"""

from __future__ import annotations

import csv
import hashlib
import io
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from ..dynamics import DiskState, Event, EventKind, Side
from ._errors import TraceError

COLUMNS = (
    "time",
    "kind",
    "particle",
    "cell",
    "x",
    "y",
    "vx_before",
    "vy_before",
    "vx_after",
    "vy_after",
    "arc",
    "disk",
    "side",
    "phi_before",
    "omega_before",
    "phi_after",
    "omega_after",
)


class TraceRow(BaseModel):
    """One trace row; ``arc`` is 1-based in files."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    time: float
    kind: EventKind
    particle: str
    cell: int
    x: float
    y: float
    vx_before: float
    vy_before: float
    vx_after: float
    vy_after: float
    arc: Optional[int] = None
    disk: Optional[int] = None
    side: Optional[Side] = None
    phi_before: Optional[float] = None
    omega_before: Optional[float] = None
    phi_after: Optional[float] = None
    omega_after: Optional[float] = None

    @classmethod
    def from_event(cls, event: Event) -> TraceRow:
        before, after = event.disk_before, event.disk_after
        return cls(
            time=event.time,
            kind=event.kind,
            particle=event.particle,
            cell=event.cell_index,
            x=event.point[0],
            y=event.point[1],
            vx_before=event.v_before[0],
            vy_before=event.v_before[1],
            vx_after=event.v_after[0],
            vy_after=event.v_after[1],
            arc=None if event.arc is None else event.arc + 1,
            disk=event.disk,
            side=event.side,
            phi_before=None if before is None else before.phi,
            omega_before=None if before is None else before.omega,
            phi_after=None if after is None else after.phi,
            omega_after=None if after is None else after.omega,
        )

    def to_event(self) -> Event:
        def disk(phi: float | None, omega: float | None) -> DiskState | None:
            return None if phi is None or omega is None else DiskState(phi, omega)

        return Event(
            time=self.time,
            kind=self.kind,
            particle=self.particle,
            cell_index=self.cell,
            point=(self.x, self.y),
            v_before=(self.vx_before, self.vy_before),
            v_after=(self.vx_after, self.vy_after),
            arc=None if self.arc is None else self.arc - 1,
            disk=self.disk,
            side=self.side,
            disk_before=disk(self.phi_before, self.omega_before),
            disk_after=disk(self.phi_after, self.omega_after),
        )

    def cells(self) -> list[Any]:
        return [getattr(self, name) for name in COLUMNS]


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (EventKind, Side)):
        return value.value
    return str(value)


def dumps_trace(events: Iterable[Event]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for event in events:
        writer.writerow([_format(v) for v in TraceRow.from_event(event).cells()])
    return buffer.getvalue()


def write_trace(events: Iterable[Event], path: Path | str) -> str:
    """Write the CSV trace and return its digest."""
    text = dumps_trace(events)
    Path(path).write_text(text, encoding="utf-8")
    return digest(text)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------


@dataclass
class RowResult:
    row_index: int
    raw: Mapping[str, Any]
    row: TraceRow | None
    error: ValidationError | None

    @property
    def is_valid(self) -> bool:
        return self.row is not None and self.error is None


def _normalize(raw: Mapping[str, Any]) -> dict[str, Any]:
    out = {}
    for key, value in raw.items():
        clean = key.strip() if key else key
        if isinstance(value, str):
            value = value.strip() or None
        out[clean] = value
    return out


def iter_trace_rows(fp: io.TextIOBase) -> Iterator[RowResult]:
    """Validate each data row of a CSV trace; row 1 is the header."""
    reader = csv.DictReader(fp)
    for index, raw in enumerate(reader, start=2):
        try:
            yield RowResult(index, raw, TraceRow.model_validate(_normalize(raw)), None)
        except ValidationError as exc:
            yield RowResult(index, raw, None, exc)


def loads_trace(text: str, *, path: Path | str = "<trace>") -> list[Event]:
    events = []
    for result in iter_trace_rows(io.StringIO(text)):
        if result.error is not None:
            first = result.error.errors()[0]
            field = ".".join(str(p) for p in first["loc"])
            raise TraceError(path, result.row_index, f"{field}: {first['msg']}")
        assert result.row is not None
        events.append(result.row.to_event())
    return events


def read_trace(path: Path | str) -> list[Event]:
    return loads_trace(Path(path).read_text(encoding="utf-8"), path=path)


# ---------------------------------------------------------------------------
# Spreadsheet export
# ---------------------------------------------------------------------------


def export_xlsx(events: Iterable[Event], path: Path | str, *, sheet_name: str = "trace") -> None:
    """Write the trace as a one-sheet workbook with a header row."""
    try:
        from openpyxl import Workbook
    except ImportError as exc:  # pragma: no cover
        raise ImportError(
            "openpyxl is required for XLSX export. Install it with: pip install openpyxl"
        ) from exc

    workbook = Workbook()
    sheet = workbook.active
    sheet.title = sheet_name
    sheet.append(list(COLUMNS))
    for event in events:
        row = TraceRow.from_event(event).cells()
        sheet.append([v.value if isinstance(v, (EventKind, Side)) else v for v in row])
    sheet.freeze_panes = "A2"
    workbook.save(str(path))


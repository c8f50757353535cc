"""Tests for trace files, their verification and the XLSX export."""

from dataclasses import replace

import pytest
from openpyxl import load_workbook

from scatterchain.dynamics import EventKind, Particle, SystemState, simulate
from scatterchain.harness import (
    COLUMNS,
    TraceError,
    dumps_trace,
    export_xlsx,
    loads_trace,
    read_trace,
    verify_trace,
    write_trace,
)
from scatterchain.harness.trace import digest


@pytest.fixture
def head_on(chain1):
    state = SystemState(0.0, chain1, particles=(Particle("p", 1, (0.5, 0.0), (1.0, 0.0)),))
    _, events = simulate(state, (), 3.0)
    return state, events


class TestCsv:
    def test_header_and_rows(self, head_on):
        _, events = head_on
        lines = dumps_trace(events).splitlines()
        assert lines[0].split(",") == list(COLUMNS)
        assert len(lines) == 1 + len(events)

    def test_read_back(self, head_on):
        _, events = head_on
        text = dumps_trace(events)
        loaded = loads_trace(text)
        assert [e.kind for e in loaded] == [EventKind.DISK_HIT, EventKind.EXIT]
        assert loaded[0].disk == 1
        assert loaded[0].time == events[0].time
        assert dumps_trace(loaded) == text

    def test_write_returns_digest(self, head_on, tmp_path):
        _, events = head_on
        path = tmp_path / "run.trace.csv"
        value = write_trace(events, path)
        assert value == digest(path.read_text(encoding="utf-8"))
        assert len(read_trace(path)) == len(events)

    def test_bad_row_is_located(self, head_on):
        _, events = head_on
        lines = dumps_trace(events).splitlines()
        lines[2] = lines[2].replace("Exit", "Vanish")
        with pytest.raises(TraceError) as exc:
            loads_trace("\n".join(lines) + "\n", path="run.csv")
        assert exc.value.row_index == 3
        assert "kind" in exc.value.message


class TestVerify:
    def test_clean_trace_passes(self, head_on):
        state, events = head_on
        report = verify_trace(events, initial=state)
        assert report.passed
        assert report.details["events"] == 2

    def test_tampered_time_fails(self, head_on):
        state, events = head_on
        tampered = [events[0], replace(events[1], time=events[1].time + 0.1)]
        report = verify_trace(tampered, initial=state)
        assert not report.passed
        assert any(f.startswith("trace_position") for f in report.failures())

    def test_flipped_velocity_component_fails(self, head_on):
        state, events = head_on
        hit = events[0]
        flipped = replace(hit, v_after=(hit.v_after[0] + 1e-6, hit.v_after[1]))
        report = verify_trace([flipped, events[1]], initial=state)
        assert not report.passed


class TestXlsx:
    def test_export(self, head_on, tmp_path):
        _, events = head_on
        path = tmp_path / "run.trace.xlsx"
        export_xlsx(events, path)
        sheet = load_workbook(path).active
        rows = list(sheet.iter_rows(values_only=True))
        assert sheet.title == "trace"
        assert rows[0] == COLUMNS
        assert rows[1][1] == "DiskHit"
        assert len(rows) == 1 + len(events)

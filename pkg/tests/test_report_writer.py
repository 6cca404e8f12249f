"""
test_report_writer.py
=====================
Escritura determinista de los CSV: encabezados, formato de decimales,
subconjuntos y errores de E/S.

UBICACIÓN: tests/test_report_writer.py
"""

import pandas as pd
import pytest

from src.data.report_writer import REPORT_COLUMNS, ReportBundle, ReportWriter, emit_reports
from src.errors import ReportIOError


class TestEmitReports:

    def test_empty_results_write_headers_only(self, tmp_path):
        written = emit_reports(ReportBundle(), tmp_path, verbose=False)
        assert set(written) == set(REPORT_COLUMNS)
        for name, path in written.items():
            assert path.read_text(encoding='utf-8') == ','.join(REPORT_COLUMNS[name]) + '\n'

    def test_subset(self, tmp_path):
        emit_reports(ReportBundle(), tmp_path, names=['policy'], verbose=False)
        assert sorted(p.name for p in tmp_path.iterdir()) == ['policy.csv']

    def test_target_is_a_file(self, tmp_path):
        target = tmp_path / 'reports'
        target.write_text('not a directory', encoding='utf-8')
        with pytest.raises(ReportIOError) as excinfo:
            emit_reports(ReportBundle(), target, verbose=False)
        assert excinfo.value.exit_code == 4


class TestReportWriter:

    def test_full_precision(self, tmp_path):
        frame = pd.DataFrame({'n': [1], 'qv': [0.1], 'bound': [0.25]})
        path = ReportWriter(tmp_path, verbose=False).write('qv', frame)
        assert path.read_text(encoding='utf-8') == 'n,qv,bound\n1,0.10000000000000001,0.25\n'

    def test_reruns_are_byte_identical(self, tmp_path):
        frame = pd.DataFrame({'layer': [0, 1], 'state': ['0:1', '1:2'], 'value': [1 / 3, 2 / 7],
                              'control': ['up', '']})
        first = ReportWriter(tmp_path / 'a', verbose=False)
        second = ReportWriter(tmp_path / 'b', verbose=False)
        first.ensure_directory()
        second.ensure_directory()
        assert first.write('policy', frame).read_bytes() == second.write('policy', frame).read_bytes()

    def test_columns_follow_fixed_order(self, tmp_path):
        frame = pd.DataFrame({'mean_error': [0.5], 'sample_id': [3], 'extra': ['x']})
        path = ReportWriter(tmp_path, verbose=False).write('consistency', frame)
        assert path.read_text(encoding='utf-8') == 'sample_id,mean_error,variance_error\n3,0.5,\n'

    def test_unknown_report(self, tmp_path):
        with pytest.raises(KeyError):
            ReportWriter(tmp_path, verbose=False).write('summary', None)

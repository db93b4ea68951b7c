import pytest
from unittest.mock import patch
from sqlalchemy import text
from sqlalchemy.exc import OperationalError

from src.database import ResultStore, RunReportRecord, WeightDistributionRecord

FIELD = {'m': 4, 'q': 16, 'reduction_poly': '0x11d', 'alpha': '0x2'}
COUNTS = [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 12240, 35700, 244800, 1203600, 3292560, 6398715, 5589600]


class TestResultStore:

    def test_create_tables(self, store):
        """Test that create_tables() creates both tables."""
        session = store.get_session()
        try:
            result = session.execute(text("SELECT name FROM sqlite_master WHERE type='table'"))
            tables = [row[0] for row in result.fetchall()]

            assert 'weight_distributions' in tables
            assert 'run_reports' in tables
        finally:
            session.close()

    def test_get_session(self, store):
        """Test that get_session() returns a valid session."""
        session = store.get_session()

        assert session is not None
        session.close()

    def test_connection_retry_gives_up(self):
        """Test that a persistent connection failure is raised after the retries."""
        error = OperationalError('SELECT 1', {}, Exception('unreachable'))
        with patch('src.database.create_engine', side_effect=error), \
                patch('src.database.time.sleep') as sleep:
            with pytest.raises(OperationalError):
                ResultStore('sqlite:///:memory:')

        assert sleep.call_count == 2


class TestResultStoreDistributions:

    def test_store_and_get(self, store):
        """Test that a stored distribution comes back unchanged."""
        assert store.store_distribution(4, 'dual', 'trace_enum', COUNTS, FIELD) is True

        assert store.get_distribution(4, 'dual', 'trace_enum', FIELD) == COUNTS

    def test_missing(self, store):
        """Test that an unknown distribution is None."""
        assert store.get_distribution(5, 'dual', 'trace_enum', FIELD) is None

    def test_other_field_ignored(self, store):
        """Test that a distribution computed on another field is not reused."""
        store.store_distribution(4, 'dual', 'trace_enum', COUNTS, FIELD)
        other = dict(FIELD, reduction_poly='0x12b')

        assert store.get_distribution(4, 'dual', 'trace_enum', other) is None

    def test_store_replaces(self, store):
        """Test that storing twice keeps one row with the latest counts."""
        store.store_distribution(4, 'primal', 'macwilliams', [1, 2], FIELD)
        store.store_distribution(4, 'primal', 'macwilliams', [1, 3], FIELD)

        session = store.get_session()
        try:
            assert session.query(WeightDistributionRecord).count() == 1
        finally:
            session.close()
        assert store.get_distribution(4, 'primal', 'macwilliams', FIELD) == [1, 3]

    def test_store_error_returns_false(self, store):
        """Test that a failing commit is rolled back and reported as False."""
        with patch('sqlalchemy.orm.Session.commit', side_effect=Exception('disk full')):
            assert store.store_distribution(4, 'dual', 'trace_enum', COUNTS, FIELD) is False

        assert store.get_distribution(4, 'dual', 'trace_enum', FIELD) is None


class TestResultStoreRunReports:

    def test_add_and_get(self, store):
        """Test that run reports are found by fingerprint, oldest first."""
        store.add_run_report('verify', 4, 'a' * 64, True, {'passed': True, 'run': 1})
        store.add_run_report('verify', 4, 'a' * 64, True, {'passed': True, 'run': 2})
        store.add_run_report('blocks', 5, 'b' * 64, False, {'passed': False})

        reports = store.get_run_reports('a' * 64)

        assert [r['run'] for r in reports] == [1, 2]

    def test_passed_flag_stored(self, store):
        """Test that the passed flag is kept next to the payload."""
        store.add_run_report('nmds', 5, 'c' * 64, False, {'passed': False})

        session = store.get_session()
        try:
            record = session.query(RunReportRecord).filter(RunReportRecord.fingerprint == 'c' * 64).first()
            assert record.passed is False
            assert record.subcommand == 'nmds'
        finally:
            session.close()

    def test_unknown_fingerprint(self, store):
        """Test that an unknown fingerprint has no reports."""
        assert store.get_run_reports('d' * 64) == []

import pytest
import os
import sys
import logging
from importlib import reload
from unittest.mock import patch, MagicMock


def _fresh_config():
    import src.config
    reload(src.config)
    return src.config.Config


class TestConfig:

    def test_config_loads_environment_variables(self, temp_env):
        """Test that Config loads environment variables correctly."""
        Config = _fresh_config()

        assert Config.THREADS == 2
        assert Config.BUDGET == 5000000
        assert Config.OUTPUT_FORMAT == 'text'
        assert Config.SEED == 7
        assert Config.EXTENDED is False
        assert Config.DATABASE_URL == 'sqlite:///:memory:'
        assert Config.LOG_LEVEL == 'DEBUG'

    def test_config_default_values(self):
        """Test that Config uses default values when env vars are not set."""
        with patch.dict(os.environ, {}, clear=True):
            Config = _fresh_config()

            assert Config.THREADS == 1
            assert Config.BUDGET == 10**9
            assert Config.OUTPUT_FORMAT == 'json'
            assert Config.SEED == 2020
            assert Config.DATABASE_URL == 'sqlite:///bch_results.db'
            assert Config.LOG_LEVEL == 'INFO'
            assert Config.LOG_FILE == ''

    def test_extended_flag(self):
        """Test that BCH_EXTENDED=1 unlocks extended workloads."""
        with patch.dict(os.environ, {'BCH_EXTENDED': '1'}, clear=True):
            assert _fresh_config().EXTENDED is True

    def test_validate_success(self, temp_env):
        """Test that validate() passes with sane values."""
        _fresh_config().validate()

    def test_validate_bad_threads(self):
        """Test that validate() rejects a zero worker count."""
        with patch.dict(os.environ, {'BCH_THREADS': '0'}, clear=True):
            with pytest.raises(ValueError, match="BCH_THREADS"):
                _fresh_config().validate()

    def test_validate_bad_budget(self):
        """Test that validate() rejects a non-positive budget."""
        with patch.dict(os.environ, {'BCH_BUDGET': '-5'}, clear=True):
            with pytest.raises(ValueError, match="BCH_BUDGET"):
                _fresh_config().validate()

    def test_validate_bad_format(self):
        """Test that validate() rejects an unknown report format."""
        with patch.dict(os.environ, {'BCH_FORMAT': 'xml'}, clear=True):
            with pytest.raises(ValueError, match="BCH_FORMAT"):
                _fresh_config().validate()

    @patch('logging.basicConfig')
    @patch('logging.FileHandler')
    @patch('logging.StreamHandler')
    def test_setup_logging(self, mock_stream_handler, mock_file_handler, mock_basic_config):
        """Test that setup_logging() configures logging correctly."""
        mock_file_handler_instance = MagicMock()
        mock_stream_handler_instance = MagicMock()
        mock_file_handler.return_value = mock_file_handler_instance
        mock_stream_handler.return_value = mock_stream_handler_instance

        with patch.dict(os.environ, {'LOG_LEVEL': 'DEBUG', 'LOG_FILE': 'logs/bch.log'}, clear=True):
            Config = _fresh_config()
            Config.setup_logging()

        mock_file_handler.assert_called_once_with('logs/bch.log')
        mock_stream_handler.assert_called_once_with(sys.stderr)

        mock_basic_config.assert_called_once_with(
            level=logging.DEBUG,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[mock_file_handler_instance, mock_stream_handler_instance]
        )

    @patch('logging.basicConfig')
    @patch('logging.FileHandler')
    def test_setup_logging_without_file(self, mock_file_handler, mock_basic_config):
        """Test that no file handler is created when LOG_FILE is empty."""
        with patch.dict(os.environ, {}, clear=True):
            Config = _fresh_config()
            Config.setup_logging()

        mock_file_handler.assert_not_called()
        assert len(mock_basic_config.call_args.kwargs['handlers']) == 1

    def test_threads_type_conversion(self):
        """Test that BCH_THREADS is converted to integer."""
        with patch.dict(os.environ, {'BCH_THREADS': '8'}, clear=True):
            Config = _fresh_config()

            assert Config.THREADS == 8
            assert isinstance(Config.THREADS, int)

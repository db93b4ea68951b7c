import pytest
import os

from src.database import ResultStore
from src.finite_field import build_field
from src.code_engine import build_code
from src.symmetric_blocks import enumerate_b63, enumerate_steiner_blocks


def pytest_collection_modifyitems(config, items):
    """m = 6 workloads run only when BCH_EXTENDED=1."""
    if os.environ.get('BCH_EXTENDED') == '1':
        return
    skip = pytest.mark.skip(reason="set BCH_EXTENDED=1 to run m=6 checks")
    for item in items:
        if 'extended' in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def temp_env():
    """Fixture to set temporary environment variables for testing."""
    original_env = os.environ.copy()

    test_env = {
        'BCH_THREADS': '2',
        'BCH_BUDGET': '5000000',
        'BCH_FORMAT': 'text',
        'BCH_SEED': '7',
        'BCH_EXTENDED': '0',
        'DATABASE_URL': 'sqlite:///:memory:',
        'LOG_LEVEL': 'DEBUG',
    }

    os.environ.update(test_env)

    yield test_env

    os.environ.clear()
    os.environ.update(original_env)


@pytest.fixture
def store():
    """In-memory result store with its tables created."""
    result_store = ResultStore('sqlite:///:memory:')
    result_store.create_tables()
    yield result_store
    result_store.engine.dispose()


@pytest.fixture(scope='session')
def field16():
    return build_field(4)


@pytest.fixture(scope='session')
def field32():
    return build_field(5)


@pytest.fixture(scope='session')
def code16():
    return build_code(4)


@pytest.fixture(scope='session')
def code32():
    return build_code(5)


@pytest.fixture(scope='session')
def steiner16(field16):
    return enumerate_steiner_blocks(field16)


@pytest.fixture(scope='session')
def b63_16(field16):
    return enumerate_b63(field16)


@pytest.fixture(scope='session')
def b63_32(field32):
    return enumerate_b63(field32)

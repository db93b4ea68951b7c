import os
import sys
import logging
from dotenv import load_dotenv

load_dotenv()

OUTPUT_FORMATS = ('json', 'csv', 'text')


class Config:
    THREADS = int(os.getenv('BCH_THREADS', '1'))
    BUDGET = int(os.getenv('BCH_BUDGET', str(10**9)))
    OUTPUT_FORMAT = os.getenv('BCH_FORMAT', 'json')
    SEED = int(os.getenv('BCH_SEED', '2020'))
    EXTENDED = os.getenv('BCH_EXTENDED', '0') == '1'
    DATABASE_URL = os.getenv('DATABASE_URL', 'sqlite:///bch_results.db')
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', '')

    @classmethod
    def validate(cls):
        if cls.THREADS < 1:
            raise ValueError("BCH_THREADS must be at least 1")
        if cls.BUDGET <= 0:
            raise ValueError("BCH_BUDGET must be positive")
        if cls.OUTPUT_FORMAT not in OUTPUT_FORMATS:
            raise ValueError(f"BCH_FORMAT must be one of {', '.join(OUTPUT_FORMATS)}")

    @classmethod
    def setup_logging(cls):
        log_level = getattr(logging, cls.LOG_LEVEL.upper())
        handlers = [logging.StreamHandler(sys.stderr)]
        if cls.LOG_FILE:
            handlers.insert(0, logging.FileHandler(cls.LOG_FILE))

        logging.basicConfig(
            level=log_level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers
        )

        # numba compiles galois ufuncs lazily and is chatty at DEBUG
        logging.getLogger('numba').setLevel(logging.WARNING)
        logging.getLogger('sqlalchemy.engine').setLevel(logging.WARNING)

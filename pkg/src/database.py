from sqlalchemy import create_engine, Column, String, Text, Boolean, DateTime, Integer, UniqueConstraint, text
from sqlalchemy.orm import declarative_base, sessionmaker, Session
from sqlalchemy.sql import func
from sqlalchemy.exc import OperationalError
from typing import Any, Dict, List, Optional
import json
import logging
import time

logger = logging.getLogger(__name__)

Base = declarative_base()

class WeightDistributionRecord(Base):
    __tablename__ = 'weight_distributions'
    __table_args__ = (UniqueConstraint('m', 'which', 'method', name='uq_distribution'),)

    id = Column(Integer, primary_key=True)
    m = Column(Integer, nullable=False)
    which = Column(String(32), nullable=False)
    method = Column(String(32), nullable=False)
    counts = Column(Text, nullable=False)
    field_record = Column(Text, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())

class RunReportRecord(Base):
    __tablename__ = 'run_reports'

    id = Column(Integer, primary_key=True)
    subcommand = Column(String(32), nullable=False)
    m = Column(Integer, nullable=False)
    fingerprint = Column(String(64), nullable=False, index=True)
    passed = Column(Boolean, default=False)
    payload = Column(Text, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())

class ResultStore:
    """Cache of weight distributions and run reports."""

    def __init__(self, database_url: str):
        self.database_url = database_url
        self.engine = None
        self.SessionLocal = None
        self._connect_with_retry()

    def _connect_with_retry(self, max_retries: int = 3, retry_delay: int = 1):
        """Connect to database with retry logic."""
        for attempt in range(max_retries):
            try:
                logger.debug(f"Attempting result store connection (attempt {attempt + 1}/{max_retries})")
                self.engine = create_engine(self.database_url)
                self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)

                with self.engine.connect() as conn:
                    conn.execute(text("SELECT 1"))

                logger.debug("Result store connection successful")
                return

            except OperationalError as e:
                logger.warning(f"Result store connection attempt {attempt + 1} failed: {e}")
                if attempt < max_retries - 1:
                    time.sleep(retry_delay)
                else:
                    logger.error("All result store connection attempts failed")
                    raise

    def create_tables(self):
        """Create database tables if they don't exist."""
        try:
            Base.metadata.create_all(bind=self.engine)
            logger.debug("Result store tables ready")
        except Exception as e:
            logger.error(f"Failed to create result store tables: {e}")
            raise

    def get_session(self) -> Session:
        return self.SessionLocal()

    def get_distribution(self, m: int, which: str, method: str,
                         field_record: Dict[str, Any]) -> Optional[List[int]]:
        """Cached counts, or None when missing or built on another field."""
        session = self.get_session()
        try:
            record = session.query(WeightDistributionRecord).filter(
                WeightDistributionRecord.m == m,
                WeightDistributionRecord.which == which,
                WeightDistributionRecord.method == method,
            ).first()
            if record is None:
                return None
            if json.loads(record.field_record) != field_record:
                logger.warning(f"Cached {which} distribution for m={m} used another field, ignoring it")
                return None
            logger.info(f"Using cached {which} distribution for m={m}")
            return json.loads(record.counts)
        except Exception as e:
            logger.error(f"Error reading cached distribution: {e}")
            return None
        finally:
            session.close()

    def store_distribution(self, m: int, which: str, method: str, counts: List[int],
                           field_record: Dict[str, Any]) -> bool:
        session = self.get_session()
        try:
            record = session.query(WeightDistributionRecord).filter(
                WeightDistributionRecord.m == m,
                WeightDistributionRecord.which == which,
                WeightDistributionRecord.method == method,
            ).first()
            if record is None:
                record = WeightDistributionRecord(m=m, which=which, method=method)
                session.add(record)
            record.counts = json.dumps([int(c) for c in counts])
            record.field_record = json.dumps(field_record, sort_keys=True)
            session.commit()
            logger.info(f"Stored {which} distribution for m={m}")
            return True
        except Exception as e:
            logger.error(f"Error storing distribution: {e}")
            session.rollback()
            return False
        finally:
            session.close()

    def add_run_report(self, subcommand: str, m: int, fingerprint: str, passed: bool,
                       payload: Dict[str, Any]) -> bool:
        session = self.get_session()
        try:
            session.add(RunReportRecord(
                subcommand=subcommand,
                m=m,
                fingerprint=fingerprint,
                passed=passed,
                payload=json.dumps(payload, sort_keys=True, default=str),
            ))
            session.commit()
            return True
        except Exception as e:
            logger.error(f"Error storing run report: {e}")
            session.rollback()
            return False
        finally:
            session.close()

    def get_run_reports(self, fingerprint: str) -> List[Dict[str, Any]]:
        session = self.get_session()
        try:
            rows = session.query(RunReportRecord).filter(
                RunReportRecord.fingerprint == fingerprint
            ).order_by(RunReportRecord.id).all()
            return [json.loads(row.payload) for row in rows]
        except Exception as e:
            logger.error(f"Error reading run reports: {e}")
            return []
        finally:
            session.close()

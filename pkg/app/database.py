"""
Database configuration and setup for the MEV-ACE Lab run archive.

This module provides SQLAlchemy engine setup and session management. The
archive stores registry states and slot outcome summaries of finished runs;
the protocol itself keeps its registry in memory.
"""

import logging
from pathlib import Path

from sqlalchemy import create_engine, text
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import declarative_base, sessionmaker

from .config import get_settings

logger = logging.getLogger(__name__)

# Get settings
settings = get_settings()

# Determine database URL (prefer explicit DATABASE_URL, otherwise local SQLite file)
if settings.database_url:
    DATABASE_URL = settings.database_url
else:
    backend_root = Path(__file__).resolve().parent.parent
    db_path = backend_root / settings.database_name
    DATABASE_URL = f"sqlite:///{db_path}"

engine = create_engine(
    DATABASE_URL,
    connect_args={"check_same_thread": False} if DATABASE_URL.startswith("sqlite") else {},
    echo=settings.debug,
    pool_pre_ping=True,
)

# Create SessionLocal class
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

# Create Base class for models
Base = declarative_base()


def create_tables(bind=None) -> None:
    """
    Create all archive tables.

    Args:
        bind: Engine to create the tables on; defaults to the configured engine.
    """
    # Import all models to ensure they are registered with Base
    from .models import IdentityRow, SlashEventRow, SlotOutcomeRow  # noqa: F401

    Base.metadata.create_all(bind=bind or engine)


def drop_tables(bind=None) -> None:
    """
    Drop all archive tables.

    WARNING: This will delete all archived runs!
    """
    from .models import IdentityRow, SlashEventRow, SlotOutcomeRow  # noqa: F401

    Base.metadata.drop_all(bind=bind or engine)


def get_database_url() -> str:
    return DATABASE_URL


def check_database_connection() -> bool:
    """
    Check if the database connection is working.

    Returns:
        bool: True if connection is successful, False otherwise
    """
    try:
        with engine.connect() as connection:
            connection.execute(text("SELECT 1"))
        return True
    except SQLAlchemyError as e:
        logger.error(f"Database connection failed: {e}")
        return False

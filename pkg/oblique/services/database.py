"""
Database configuration and session management for stored reports.

The engine URL comes from OBLIQUE_DATABASE_URL (SQLite file by default).
"""

from typing import Annotated

from fastapi import Depends
from sqlmodel import Session, SQLModel, create_engine

from .config import get_settings

database_url = get_settings().database_url

# SQLite connections are shared between the worker threads of the server
connect_args = {"check_same_thread": False} if database_url.startswith("sqlite") else {}

engine = create_engine(database_url, connect_args=connect_args)


def create_db_and_tables():
    """
    Create database tables based on SQLModel metadata.

    Called once during application startup.
    """
    SQLModel.metadata.create_all(engine)


def get_session():
    """
    Yield a database session that is closed when the request is done.

    Yields:
        Session: SQLModel database session
    """
    with Session(engine) as session:
        yield session


SessionDep = Annotated[Session, Depends(get_session)]

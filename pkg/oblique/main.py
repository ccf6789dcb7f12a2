import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from sqlalchemy.exc import SQLAlchemyError

from .routers import analysis
from .services.config import get_settings
from .services.database import create_db_and_tables
from .services.errors import ConvergenceFailure, ObliqueError, VerificationFailure


# lifespan context manager for startup/shutdown events
@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    if not get_settings().api_key:
        raise ValueError("No OBLIQUE_API_KEY found in environment variables.")
    create_db_and_tables()
    yield
    # Shutdown


app = FastAPI(title="Oblique Projections", lifespan=lifespan)


@app.exception_handler(ConvergenceFailure)
@app.exception_handler(VerificationFailure)
async def numerical_failure_handler(request: Request, exc: ObliqueError):
    """Internal inconsistencies are server errors, not bad input."""
    logging.error(f"Numerical failure: {exc}", exc_info=True)
    return JSONResponse(status_code=500, content={"detail": f"Numerical failure: {exc}"})


@app.exception_handler(ObliqueError)
async def analysis_exception_handler(request: Request, exc: ObliqueError):
    return JSONResponse(
        status_code=422,
        content={"detail": str(exc), "error": type(exc).__name__},
    )


@app.exception_handler(SQLAlchemyError)
async def database_exception_handler(request: Request, exc: SQLAlchemyError):
    """Exception handler for DB errors."""
    logging.error(f"Database error: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500, content={"detail": "Database operation failed"}
    )


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Catch-all exception handler for unhandled errors."""
    logging.error(f"Unhandled exception: {exc}", exc_info=True)
    return JSONResponse(status_code=500, content={"detail": "Internal server error"})


app.include_router(analysis.router)

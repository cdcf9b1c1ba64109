"""
FastAPI Main Application - HTTP surface for the equitable algebra toolkit
Mirrors the CLI: normal forms, reduction, modules, classification and verification suites
"""

from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.gzip import GZipMiddleware

from app.core.config import settings
from app.core.logging import configure_logging, get_logger
from app.api.v1 import api_router as v1_router
from app.middleware.timing import TimingMiddleware
from app.middleware.error_handling import ErrorHandlingMiddleware
from app.services.presentation import REDUCTION_RULES
from app.services.uq_oracle import cache_info

configure_logging(settings)
logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan management - handles startup and shutdown"""
    logger.info("starting API", version=settings.VERSION, environment=settings.ENVIRONMENT,
                rules=len(REDUCTION_RULES))

    yield  # App runs here

    logger.info("shutting down API", **cache_info())


def create_app() -> FastAPI:
    app = FastAPI(
        title=settings.APP_NAME,
        description=settings.DESCRIPTION,
        version=settings.VERSION,
        docs_url="/api/docs" if not settings.is_production else None,
        redoc_url="/api/redoc" if not settings.is_production else None,
        lifespan=lifespan,
    )

    # Middleware configuration
    app.add_middleware(
        CORSMiddleware,
        allow_origins=settings.ALLOWED_ORIGINS,
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.add_middleware(GZipMiddleware, minimum_size=1000)
    app.add_middleware(TimingMiddleware)
    app.add_middleware(ErrorHandlingMiddleware)

    app.include_router(v1_router, prefix="/api/v1")

    @app.get("/health")
    async def health_check():
        """Health check endpoint for monitoring"""
        return {
            "status": "healthy",
            "version": settings.VERSION,
            "environment": settings.ENVIRONMENT,
            "rules": len(REDUCTION_RULES),
            "caches": cache_info(),
        }

    return app


app = create_app()


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.is_development,
        log_level=settings.LOG_LEVEL.lower(),
    )

"""
Error Handling Middleware - Centralized error processing
Algebra errors become 422 responses; anything else is a 500.
"""

import time
import traceback
from typing import Callable

from fastapi import Request, Response
from fastapi.responses import JSONResponse
from starlette.middleware.base import BaseHTTPMiddleware

from app.core.config import settings
from app.core.exceptions import AlgebraError
from app.core.logging import get_logger

logger = get_logger(__name__)


class ErrorHandlingMiddleware(BaseHTTPMiddleware):
    """Middleware for centralized error handling and logging"""

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        try:
            return await call_next(request)
        except AlgebraError as exc:
            return self.handle_algebra_error(request, exc)
        except Exception as exc:
            return self.handle_exception(request, exc)

    @staticmethod
    def _correlation_id() -> str:
        return f"err_{int(time.time() * 1000)}"

    def handle_algebra_error(self, request: Request, exc: AlgebraError) -> JSONResponse:
        correlation_id = self._correlation_id()
        logger.info(
            "request rejected",
            correlation_id=correlation_id,
            method=request.method,
            path=request.url.path,
            error=exc.code,
            detail=exc.message,
        )
        content = exc.to_dict()
        content["correlation_id"] = correlation_id
        return JSONResponse(status_code=422, content=content)

    def handle_exception(self, request: Request, exc: Exception) -> JSONResponse:
        correlation_id = self._correlation_id()
        logger.error(
            "request failed",
            correlation_id=correlation_id,
            method=request.method,
            url=str(request.url),
            client_ip=request.client.host if request.client else "unknown",
            error=str(exc),
            traceback=traceback.format_exc(),
        )

        if settings.is_development:
            return JSONResponse(
                status_code=500,
                content={
                    "error": "internal_error",
                    "detail": str(exc),
                    "type": type(exc).__name__,
                    "correlation_id": correlation_id,
                    "traceback": traceback.format_exc().split("\n") if settings.DEBUG else None,
                },
            )
        return JSONResponse(
            status_code=500,
            content={"error": "internal_error", "correlation_id": correlation_id},
        )

"""
Timing Middleware - Performance monitoring for API requests
"""

import time
from typing import Callable

from fastapi import Request, Response
from starlette.middleware.base import BaseHTTPMiddleware

from app.core.config import settings
from app.core.logging import get_logger

logger = get_logger(__name__)


class TimingMiddleware(BaseHTTPMiddleware):
    """Adds X-Process-Time and logs requests slower than SLOW_REQUEST_SECONDS"""

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        start_time = time.perf_counter()

        response = await call_next(request)

        process_time = time.perf_counter() - start_time
        response.headers["X-Process-Time"] = f"{process_time:.6f}"

        if process_time > settings.SLOW_REQUEST_SECONDS:
            logger.warning(
                "slow request",
                method=request.method,
                path=request.url.path,
                seconds=round(process_time, 3),
            )

        return response

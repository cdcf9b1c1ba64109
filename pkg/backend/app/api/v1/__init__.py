"""
API v1 Router - Algebra, module and verification endpoints
"""

from fastapi import APIRouter
from .endpoints import (
    algebra,
    modules,
    verify,
)

api_router = APIRouter()

# Include all endpoint routers
api_router.include_router(
    algebra.router,
    prefix="/algebra",
    tags=["algebra"]
)

api_router.include_router(
    modules.router,
    prefix="/modules",
    tags=["modules"]
)

api_router.include_router(
    verify.router,
    prefix="/verify",
    tags=["verify"]
)

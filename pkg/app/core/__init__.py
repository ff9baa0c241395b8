"""
Core utilities
"""
from core.config import settings
from core.errors import (
    TauberError,
    ArgumentError,
    DomainError,
    SpecValidationError,
    PreconditionError,
    ResourceError,
    SeriesOverflowError,
)
from core.logging import configure_logging

__all__ = [
    "settings",
    "configure_logging",
    "TauberError",
    "ArgumentError",
    "DomainError",
    "SpecValidationError",
    "PreconditionError",
    "ResourceError",
    "SeriesOverflowError",
]

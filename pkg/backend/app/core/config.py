"""
Configuration Management - Environment-based settings with validation
Supports development, staging, production and testing environments
"""

import os
from typing import List, Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Application Info
    APP_NAME: str = "Equitable Algebra Toolkit"
    VERSION: str = "1.0.0"
    DESCRIPTION: str = "Exact normal forms, presentations and modules for the equitable U_q(sl2)"

    # Environment
    ENVIRONMENT: str = "development"
    DEBUG: bool = True

    # Server Configuration
    HOST: str = "0.0.0.0"
    PORT: int = 8000
    ALLOWED_ORIGINS: List[str] = [
        "http://localhost:3000",
        "http://127.0.0.1:3000",
    ]

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "console"

    # Verification bounds
    MAX_WORD_LEN: int = 5
    MAX_D: int = 8
    DEFAULT_Q: Optional[str] = None
    RANDOM_SAMPLES: int = 2000
    RANDOM_WORD_LEN: int = 6
    RANDOM_SEED: int = 20240521
    ORACLE_SAMPLES: int = 1000
    ORACLE_WORD_LEN: int = 8
    INDEPENDENCE_WORD_LEN: int = 4

    # Rewriting
    MAX_REDUCTION_STEPS: int = 2_000_000
    ASSERT_TERMINATION: bool = False

    # Input limits
    MAX_GENERATOR_POWER: int = 12
    MAX_TERM_LENGTH: int = 24
    MAX_SCALAR_EXPONENT: int = 512

    # Memo sizes
    ORACLE_CACHE_SIZE: int = 100_000
    REDUCER_CACHE_SIZE: int = 100_000

    # Performance
    MAX_CONCURRENT_CHECKS: int = 4
    SLOW_REQUEST_SECONDS: float = 1.0

    @field_validator("ENVIRONMENT")
    @classmethod
    def validate_environment(cls, v):
        if v not in ["development", "staging", "production", "testing"]:
            raise ValueError("ENVIRONMENT must be one of: development, staging, production, testing")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v):
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"LOG_LEVEL must be one of: {valid_levels}")
        return v.upper()

    @field_validator("LOG_FORMAT")
    @classmethod
    def validate_log_format(cls, v):
        if v not in ["console", "json"]:
            raise ValueError("LOG_FORMAT must be 'console' or 'json'")
        return v

    @field_validator(
        "RANDOM_SAMPLES",
        "RANDOM_WORD_LEN",
        "ORACLE_SAMPLES",
        "ORACLE_WORD_LEN",
        "MAX_REDUCTION_STEPS",
        "MAX_CONCURRENT_CHECKS",
        "MAX_GENERATOR_POWER",
        "MAX_TERM_LENGTH",
        "MAX_SCALAR_EXPONENT",
        "ORACLE_CACHE_SIZE",
        "REDUCER_CACHE_SIZE",
    )
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError("bound must be positive")
        return v

    @field_validator("MAX_WORD_LEN", "MAX_D", "INDEPENDENCE_WORD_LEN")
    @classmethod
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError("bound must be non-negative")
        return v

    @field_validator("ALLOWED_ORIGINS")
    @classmethod
    def validate_origins(cls, v):
        if "*" in v and os.getenv("ENVIRONMENT") == "production":
            raise ValueError("Wildcard origins not allowed in production")
        return v

    @property
    def is_development(self) -> bool:
        return self.ENVIRONMENT == "development"

    @property
    def is_production(self) -> bool:
        return self.ENVIRONMENT == "production"


# Environment-specific configurations
class DevelopmentSettings(Settings):
    """Development environment settings"""
    ENVIRONMENT: str = "development"
    DEBUG: bool = True
    LOG_LEVEL: str = "DEBUG"


class ProductionSettings(Settings):
    """Production environment settings"""
    ENVIRONMENT: str = "production"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "json"
    ALLOWED_ORIGINS: List[str] = []  # Must be configured via environment


class TestingSettings(Settings):
    """Testing environment settings"""
    ENVIRONMENT: str = "testing"
    DEBUG: bool = True
    LOG_LEVEL: str = "WARNING"
    ASSERT_TERMINATION: bool = True
    RANDOM_SAMPLES: int = 300
    ORACLE_SAMPLES: int = 200


def get_settings() -> Settings:
    """Factory function to get settings based on environment"""
    env = os.getenv("ENVIRONMENT", "development").lower()

    if env == "production":
        return ProductionSettings()
    elif env == "testing":
        return TestingSettings()
    else:
        return DevelopmentSettings()


# Global settings instance
settings = get_settings()

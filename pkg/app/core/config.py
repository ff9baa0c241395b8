"""
Application configuration
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator
from typing import List, Union


class Settings(BaseSettings):
    """Application settings"""

    # App
    APP_NAME: str = "tauberperm"
    APP_VERSION: str = "0.1.0"
    DEBUG: bool = False
    ENVIRONMENT: str = "development"

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # Enumeration guards
    PARTITION_GUARD: int = 60
    PARTITION_HARD_LIMIT: int = 90
    EXACT_COUNT_GUARD: int = 20

    # Truncation rules for evaluating series at e^{-1/n}
    EVAL_ORDER_FACTOR: int = 20
    EVAL_ORDER_PAD: int = 200
    TAIL_HORIZON_FACTOR: int = 8

    # Tolerances
    VALUE_MERGE_TOL: float = 1e-12
    PROB_SUM_TOL: float = 1e-10
    NORMALIZATION_TOL: float = 1e-10
    BOUNDED_TOL: float = 1e-12
    INEQUALITY_SLACK: float = 1e-9
    ZERO_TOL: float = 1e-12

    # Check parameters
    LOG_DERIVATIVE_GRID: Union[List[float], str] = [k / 100 for k in range(1, 100)]
    EXPANSION_DELTA: float = 0.05
    GAP_GRID_POINTS: int = 10_000
    DEFAULT_SEED: int = 20240607

    @field_validator("LOG_DERIVATIVE_GRID", mode="before")
    @classmethod
    def assemble_grid(cls, v: Union[str, List[float]]) -> Union[List[float], str]:
        if isinstance(v, str) and not v.startswith("["):
            return [float(i.strip()) for i in v.split(",") if i.strip()]
        elif isinstance(v, (list, str)):
            return v
        raise ValueError(v)

    # Celery (sweeps)
    REDIS_URL: str = "redis://localhost:6379/0"
    CELERY_TASK_ALWAYS_EAGER: bool = True
    SWEEP_QUEUE: str = "sweeps"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="TAUBERPERM_",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()

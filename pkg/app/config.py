"""Configuration settings for graph index computations and experiments."""

from __future__ import annotations

import os

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_prefix="GRAPH_INDEX_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Worker processes for Monte Carlo replication (GRAPH_INDEX_THREADS)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, gt=0)

    # Experiment defaults
    default_replications: int = Field(default=200, gt=0)
    default_seed: int = Field(default=0, ge=0, lt=2**64)
    ws_betas: list[float] = [0.1, 0.3, 0.5, 0.7, 0.9]
    node_grid: list[int] = list(range(20, 381, 20))

    # Random regular sampler
    rr_max_restarts: int = Field(default=200, gt=0)
    rr_max_swap_factor: int = Field(default=100, gt=0)

    # Kernels and oracles
    dense_kernel_max_nodes: int = 2048
    brute_force_max_nodes: int = 6

    # Output
    float_format: str = "%.17g"
    log_level: str = "INFO"


settings = Settings()

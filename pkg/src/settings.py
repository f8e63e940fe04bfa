"""
settings.py — Environment-Driven Runtime Settings
===================================================

Runtime knobs are read from the environment (and a local .env file, if
present) with the ROKHLIN_ prefix:

    ROKHLIN_THREADS      worker cap for pipeline levels (0 = sequential)
    ROKHLIN_LOG_LEVEL    root log level for the CLI
    ROKHLIN_REPORT_DIR   default directory for CSV/JSON reports
    ROKHLIN_MAX_MODULUS  refuse towers whose modulus exceeds this (desk scale)

Usage:
    from src.settings import get_settings
    threads = get_settings().threads
"""

from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file (if present)
load_dotenv()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="ROKHLIN_", extra="ignore")

    threads: int = Field(default=0, ge=0)
    log_level: str = "INFO"
    report_dir: Path = Path("reports")
    max_modulus: int = Field(default=1000, ge=1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()

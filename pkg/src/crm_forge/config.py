"""Runtime configuration with flags > environment > defaults precedence.

Environment names: CRMFORGE_PORT, CRMFORGE_DATA_DIR, CRMFORGE_LOG_LEVEL,
CRMFORGE_CORS (comma-separated origins), CRMFORGE_MAX_DEPTH.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

LOG_LEVELS = ("ERROR", "WARN", "INFO", "DEBUG")


@dataclass
class Config:
    port: int = 8080
    data_dir: Path = Path("./data")
    seed_on_empty: bool = False
    cors_allowlist: list[str] = field(default_factory=list)
    max_query_depth: int = 15
    log_level: str = "INFO"


def _env(name: str) -> Optional[str]:
    value = os.environ.get(name)
    return value if value not in (None, "") else None


def load_config(
    port: Optional[int] = None,
    data_dir: Optional[str] = None,
    seed_on_empty: bool = False,
    cors: Optional[str] = None,
    max_depth: Optional[int] = None,
    log_level: Optional[str] = None,
) -> Config:
    config = Config()
    env_port = _env("CRMFORGE_PORT")
    if env_port is not None:
        config.port = int(env_port)
    env_dir = _env("CRMFORGE_DATA_DIR")
    if env_dir is not None:
        config.data_dir = Path(env_dir)
    env_cors = _env("CRMFORGE_CORS")
    if env_cors is not None:
        config.cors_allowlist = [o.strip() for o in env_cors.split(",") if o.strip()]
    env_depth = _env("CRMFORGE_MAX_DEPTH")
    if env_depth is not None:
        config.max_query_depth = int(env_depth)
    env_level = _env("CRMFORGE_LOG_LEVEL")
    if env_level is not None:
        config.log_level = env_level.upper()

    if port is not None:
        config.port = port
    if data_dir is not None:
        config.data_dir = Path(data_dir)
    if seed_on_empty:
        config.seed_on_empty = True
    if cors is not None:
        config.cors_allowlist = [o.strip() for o in cors.split(",") if o.strip()]
    if max_depth is not None:
        config.max_query_depth = max_depth
    if log_level is not None:
        config.log_level = log_level.upper()
    if config.log_level not in LOG_LEVELS:
        config.log_level = "INFO"
    return config

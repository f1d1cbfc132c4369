"""
Environment-driven settings.
Values come from the process environment, optionally seeded from a `.env` file.
"""

import os
from functools import lru_cache

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, ConfigDict

from app.utils.exceptions import ConfigurationException


class Settings(BaseModel):
    """Caps, budgets and harness defaults."""
    model_config = ConfigDict(frozen=True)

    port_cap: int = 10_000_000
    product_vertex_cap: int = 5000
    dense_eigen_limit: int = 4096
    enumeration_budget: int = 10_000_000
    group_variable_cap: int = 20
    clique_vertex_cap: int = 200
    suite_timeout: float = 300.0
    workers: int = 1


_ENV_NAMES = {
    "port_cap": "GAPBENCH_PORT_CAP",
    "product_vertex_cap": "GAPBENCH_PRODUCT_VERTEX_CAP",
    "dense_eigen_limit": "GAPBENCH_DENSE_EIGEN_LIMIT",
    "enumeration_budget": "GAPBENCH_ENUMERATION_BUDGET",
    "group_variable_cap": "GAPBENCH_GROUP_VARIABLE_CAP",
    "clique_vertex_cap": "GAPBENCH_CLIQUE_VERTEX_CAP",
    "suite_timeout": "GAPBENCH_SUITE_TIMEOUT",
    "workers": "GAPBENCH_WORKERS",
}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process."""
    load_dotenv(find_dotenv(usecwd=True))
    values = {}
    for field, env_name in _ENV_NAMES.items():
        raw = os.getenv(env_name)
        if raw is None or raw == "":
            continue
        kind = Settings.model_fields[field].annotation
        try:
            values[field] = kind(raw.replace("_", ""))
        except ValueError:
            raise ConfigurationException(f"{env_name} must be a {kind.__name__}, got {raw!r}")
    return Settings(**values)

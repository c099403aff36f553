import logging
import os
from typing import List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

import permcore

# Load environment variables
load_dotenv()

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


class RunConfig(BaseModel):
    """Budgets, ceilings and output settings shared by the CLI and the pipelines."""

    search_node_budget: int = 10**7
    coset_budget: int = 10**5
    catalog_paths: List[str] = Field(default_factory=list)
    parallelism: int = Field(default_factory=lambda: os.cpu_count() or 1)
    output_format: Literal["json", "markdown"] = "json"
    cache_path: str = "hurwitz_cache.db"
    use_cache: bool = True
    max_enumeration: int = permcore.MAX_ENUMERATION
    definitive_embedding_ceiling: int = permcore.DEFINITIVE_EMBEDDING_CEILING
    subgroup_ceiling: int = permcore.SUBGROUP_CEILING
    order_ceiling: int = permcore.ORDER_CEILING

    @field_validator(
        "search_node_budget",
        "coset_budget",
        "parallelism",
        "max_enumeration",
        "definitive_embedding_ceiling",
        "subgroup_ceiling",
        "order_ceiling",
    )
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("budgets, ceilings and worker counts must be positive")
        return value


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    return int(raw)


def load_config(**overrides) -> RunConfig:
    """RunConfig from HF_* environment variables; keyword overrides win."""
    values = {}
    catalog = os.getenv("HF_CATALOG")
    if catalog:
        values["catalog_paths"] = [p for p in catalog.split(os.pathsep) if p]
    for field, env in (
        ("search_node_budget", "HF_NODE_BUDGET"),
        ("coset_budget", "HF_COSET_BUDGET"),
        ("parallelism", "HF_WORKERS"),
    ):
        value = _env_int(env)
        if value is not None:
            values[field] = value
    if os.getenv("HF_OUTPUT_FORMAT"):
        values["output_format"] = os.getenv("HF_OUTPUT_FORMAT")
    if os.getenv("HF_CACHE_PATH"):
        values["cache_path"] = os.getenv("HF_CACHE_PATH")
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def configure_logging(level: Optional[str] = None) -> None:
    # Reports go to stdout; logs stay on stderr.
    logging.basicConfig(
        level=(level or os.getenv("HF_LOG_LEVEL") or "WARNING").upper(),
        format=LOG_FORMAT,
    )

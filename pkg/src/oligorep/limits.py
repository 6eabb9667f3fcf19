"""Desk-scale resource limits.

Defaults keep every automorphism group small enough for exact character
tables.  Overrides come from the OLIGOREP_LIMITS environment variable, a JSON
object such as

    OLIGOREP_LIMITS='{"max_base": {"graph": 5}, "subgroup_order": 1000}'

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import SizeLimitExceeded

ENV_VAR = "OLIGOREP_LIMITS"

DEFAULT_MAX_BASE = {
    "pure_set": 6,
    "linear_order": 6,
    "graph": 6,
    "vector_space": 4,
    "vector_space_q3": 3,
    "boolean_algebra": 3,
}


@dataclass
class RunLimits:
    max_base: dict = field(default_factory=lambda: dict(DEFAULT_MAX_BASE))
    subgroup_order: int = 2000
    table_order: int = 25000
    tree_nodes: int = 400000

    def base_limit(self, cls_id: str) -> int:
        return self.max_base.get(cls_id, 6)

    def check_base(self, cls_id: str, size: int) -> None:
        limit = self.base_limit(cls_id)
        if size > limit:
            raise SizeLimitExceeded(
                f"base size {size} exceeds limit {limit} for class {cls_id!r}"
            )


def get_limits() -> RunLimits:
    limits = RunLimits()
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return limits
    try:
        overrides = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SizeLimitExceeded(f"cannot parse {ENV_VAR}: {exc}") from exc
    if not isinstance(overrides, dict):
        raise SizeLimitExceeded(f"{ENV_VAR} must be a JSON object")
    for key, value in overrides.items():
        if key == "max_base":
            if not isinstance(value, dict):
                raise SizeLimitExceeded(f"{ENV_VAR}: max_base must be an object")
            limits.max_base.update({str(k): int(v) for k, v in value.items()})
        elif key in ("subgroup_order", "table_order", "tree_nodes"):
            setattr(limits, key, int(value))
        else:
            raise SizeLimitExceeded(f"{ENV_VAR}: unknown limit {key!r}")
    return limits

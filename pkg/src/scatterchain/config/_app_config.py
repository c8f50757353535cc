"""Typed config groups: pydantic models whose fields resolve through the layers.

::

    class Tolerances(AppConfig):
        class Meta:
            env_prefix = "SCATTERCHAIN_TOL"

        tangent: float = 1e-9

    Tolerances.load().tangent  # SCATTERCHAIN_TOL_TANGENT, --tolerance tangent=..., scenario
"""

from __future__ import annotations

from typing import TypeVar

from pydantic import BaseModel, ConfigDict

from ._reader import active_repository, lookup, places_for
from ._repository import ConfigRepository
from ._types import UNDEFINED

_C = TypeVar("_C", bound="AppConfig")


class AppConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    class Meta:
        prefix: str = ""
        env_prefix: str = ""

    @classmethod
    def load(cls: type[_C], repo: ConfigRepository | None = None) -> _C:
        """Validated group; fields no layer defines keep their model default.

        Field ``f`` is read from ``{ENV_PREFIX}_{F}`` and then from the key
        ``{prefix}_{f}`` (plain ``f`` without a prefix).
        """
        source = repo or active_repository()
        prefix = getattr(cls.Meta, "prefix", "")
        env_prefix = getattr(cls.Meta, "env_prefix", "")
        found = {}
        for name in cls.model_fields:
            key = f"{prefix}_{name}" if prefix else name
            env = f"{env_prefix}_{name}".upper() if env_prefix else None
            value = lookup(source, places_for(key, env))
            if value is not UNDEFINED:
                found[name] = value
        return cls.model_validate(found)

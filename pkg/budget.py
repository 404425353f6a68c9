import os
from dataclasses import dataclass, fields, replace

import dotenv

from errors import DomainError, ResourceError

dotenv.load_dotenv()

ENV_PREFIX = "AFFINE_COCENTER_"


@dataclass(frozen=True)
class Budget:
    length_bound: int = 14
    memo_entries: int = 1_000_000
    frontier: int = 1_000_000
    search_slack: int = 4
    omega_window: int = 2
    kappa_window: int = 1

    @classmethod
    def from_env(cls) -> "Budget":
        values = {}
        for f in fields(cls):
            raw = os.getenv(ENV_PREFIX + f.name.upper())
            if raw is not None:
                values[f.name] = _parse_non_negative(f.name, raw)
        return cls(**values)

    def override(self, **kwargs) -> "Budget":
        changes = {}
        for name, value in kwargs.items():
            if value is None:
                continue
            changes[name] = _parse_non_negative(name, value)
        return replace(self, **changes)

    def check_length(self, length_bound: int):
        if length_bound > self.length_bound:
            raise ResourceError(f"length bound {length_bound} exceeds the configured maximum {self.length_bound}")


def _parse_non_negative(name: str, raw) -> int:
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be an integer, got {raw!r}")
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value}")
    return value


DEFAULT_BUDGET = Budget.from_env()

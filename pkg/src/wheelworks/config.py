from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from wheelworks.errors import CapacityError


@dataclass(frozen=True)
class Caps:
    fpl_n_max: int = 5
    wheel_generic_n_max: int = 4
    wheel_cyclo_n_max: int = 5
    hamiltonian_n_max: int = 12
    markov_n_max: int = 5
    matchings_max: int = 300_000


@dataclass(frozen=True)
class Config:
    cache_dir: Path | None = None
    caps: Caps = field(default_factory=Caps)
    prime_count: int = 2
    output: str = "json"
    threads: int = 1

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        env_cache = os.environ.get("WHEELWORKS_CACHE")
        env_threads = os.environ.get("WHEELWORKS_THREADS")
        kwargs = {}
        if env_cache:
            kwargs["cache_dir"] = Path(env_cache)
        if env_threads:
            kwargs["threads"] = max(1, int(env_threads))
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


DEFAULT = Config()


def check_cap(name: str, value: int, cap: int) -> None:
    if value > cap:
        raise CapacityError(f"{name}={value} exceeds the configured cap {cap}")

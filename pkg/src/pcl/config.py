from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass
class Settings:
    prime_limit: int = 10**6
    level_max: int = 2**20
    # operations quadratic in the modulus refuse larger n
    quadratic_limit: int = 2**14
    sieve_cache: Path | None = None

    def cache_path(self) -> Path | None:
        if self.sieve_cache is not None:
            return Path(self.sieve_cache)
        env = os.environ.get("PCL_SIEVE_CACHE")
        return Path(env) if env else None


settings = Settings()


@contextmanager
def override(**kwargs):
    """Temporarily change fields of the global settings."""
    names = {f.name for f in fields(Settings)}
    old = {}
    for k, v in kwargs.items():
        if k not in names:
            raise AttributeError(k)
        old[k] = getattr(settings, k)
        setattr(settings, k, v)
    try:
        yield settings
    finally:
        for k, v in old.items():
            setattr(settings, k, v)

"""Coset topologies on the integers, Golomb systems, truncated profinite
integers and supernatural numbers, with brute-force oracles on finite quotients."""

from .config import settings
from .errors import BoundExceeded, PCLError, PreconditionError

__all__ = ["settings", "BoundExceeded", "PCLError", "PreconditionError"]
__version__ = "0.1.0"

"""Segmented Eratosthenes sieve with an on-disk bit-array cache.

Cache layout: 8-byte magic ``PCLSIEVE``, uint32 version, uint64 limit,
then ``numpy.packbits`` of the primality flags for 0..limit.
"""

from __future__ import annotations

import os
import struct
import tempfile
import threading
from math import isqrt
from pathlib import Path

import numpy as np

from .config import settings

MAGIC = b"PCLSIEVE"
VERSION = 1
_HEADER = struct.Struct("<8sIQ")
SEGMENT = 1 << 18

_lock = threading.Lock()
_memo: dict[str, np.ndarray] = {}


def _small_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def sieve_flags(limit: int) -> np.ndarray:
    """Boolean array f with f[k] true iff k is prime, for 0 <= k <= limit."""
    if limit < 1:
        return np.zeros(limit + 1, dtype=bool)
    base = _small_flags(isqrt(limit) + 1)
    base_primes = np.flatnonzero(base)
    out = np.zeros(limit + 1, dtype=bool)
    for lo in range(0, limit + 1, SEGMENT):
        hi = min(lo + SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base_primes:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo :: p] = False
        if lo == 0:
            seg[: min(2, hi)] = False
        out[lo:hi] = seg
    return out


def _write_cache(path: Path, limit: int, flags: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".sieve-")
    with os.fdopen(fd, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, limit))
        fh.write(np.packbits(flags).tobytes())
    os.replace(tmp, path)


def _read_cache(path: Path, limit: int) -> np.ndarray | None:
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    if len(raw) < _HEADER.size:
        return None
    magic, version, cached = _HEADER.unpack_from(raw)
    if magic != MAGIC or version != VERSION or cached < limit:
        return None
    bits = np.frombuffer(raw, dtype=np.uint8, offset=_HEADER.size)
    flags = np.unpackbits(bits, count=cached + 1).astype(bool)
    return flags[: limit + 1]


def prime_flags(limit: int | None = None, cache: Path | None = None) -> np.ndarray:
    """Primality flags up to ``limit``, reusing memory and disk caches."""
    limit = settings.prime_limit if limit is None else limit
    path = cache if cache is not None else settings.cache_path()
    with _lock:
        for flags in _memo.values():
            if len(flags) > limit:
                return flags[: limit + 1]
        flags = _read_cache(path, limit) if path else None
        if flags is None:
            flags = sieve_flags(limit)
            if path:
                _write_cache(path, limit, flags)
        _memo[str(limit)] = flags
        return flags


def primes_up_to(limit: int | None = None) -> np.ndarray:
    return np.flatnonzero(prime_flags(limit)).astype(np.int64)


def prime_list(limit: int) -> list[int]:
    return [int(p) for p in primes_up_to(limit)]


def clear_memory_cache() -> None:
    with _lock:
        _memo.clear()

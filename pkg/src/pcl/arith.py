"""Small integer helpers shared by the other modules."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt, lcm


@lru_cache(maxsize=65536)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            if n % q == 0:
                e = 0
                while n % q == 0:
                    n //= q
                    e += 1
                out.append((q, e))
        d += 6
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {p: e}; empty for n = 1."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(_factor_tuple(n))


def support(n: int) -> list[int]:
    return sorted(factorize(n))


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def rad(n: int) -> int:
    r = 1
    for p in factorize(n):
        r *= p
    return r


def phi(n: int) -> int:
    r = n
    for p in factorize(n):
        r = r // p * (p - 1)
    return r


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def sigma(n: int) -> int:
    r = 1
    for p, e in factorize(n).items():
        r *= (p ** (e + 1) - 1) // (p - 1)
    return r


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_power_parts(n: int) -> list[tuple[int, int, int]]:
    """[(p, e, p**e)] for p | n, increasing p."""
    return [(p, e, p**e) for p, e in sorted(factorize(n).items())]


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    """Solve x = r_i mod m_i for pairwise coprime moduli; returns (x, M)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        if gcd(m, mi) != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m, m


def lcm_all(xs) -> int:
    out = 1
    for x in xs:
        out = lcm(out, x)
    return out


def units(n: int) -> list[int]:
    return [x for x in range(n) if gcd(x, n) == 1]


def nilpotents(n: int) -> list[int]:
    r = rad(n) if n > 1 else 1
    return list(range(0, n, r))

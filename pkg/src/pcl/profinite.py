"""Arithmetic in the profinite integers at a finite working modulus.

A ``TruncatedProfinite`` stands for the clopen coset r + N*Zhat, not for a
single element: valuations are capped at v_p(N), and everything reported
is an exact statement about that coset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

import numpy as np

from . import arith
from .errors import PreconditionError
from .finite_topology import ResidueSet, full_mask, lift_mask
from .sieve import primes_up_to


@dataclass(frozen=True)
class TruncatedProfinite:
    level: int
    residue: int

    def __post_init__(self):
        if self.level < 1 or not 0 <= self.residue < self.level:
            raise PreconditionError("residue must lie in [0, level)")

    @classmethod
    def from_integer(cls, x: int, N: int) -> "TruncatedProfinite":
        return cls(N, x % N)


@dataclass(frozen=True)
class Valuation:
    k: int
    exact: bool

    def __str__(self) -> str:
        return f"{'Exact' if self.exact else 'AtLeast'}({self.k})"

    def to_json(self) -> dict:
        return {"k": self.k, "exact": self.exact}


def crt_split(x: TruncatedProfinite) -> dict[int, tuple[int, int]]:
    N = x.level
    if N == 1:
        return {}
    return {p: (e, x.residue % q) for p, e, q in arith.prime_power_parts(N)}


def crt_join_residue(residues: list[int], moduli: list[int]) -> int:
    return arith.crt(residues, moduli)[0]


def crt_join(parts: dict[int, tuple[int, int]]) -> TruncatedProfinite:
    moduli = [p**e for p, (e, _) in sorted(parts.items())]
    residues = [r for _, (_, r) in sorted(parts.items())]
    x, N = arith.crt(residues, moduli)
    return TruncatedProfinite(N, x)


def valuation(x: TruncatedProfinite, p: int) -> Valuation:
    N = x.level
    if N % p:
        raise PreconditionError(f"{p} does not divide the level {N}")
    cap = arith.vp(N, p)
    r = x.residue % p**cap
    if r == 0:
        return Valuation(cap, False)
    return Valuation(arith.vp(r, p), True)


def bezout_generator(xs: list[TruncatedProfinite]) -> TruncatedProfinite:
    """Generator of the ideal spanned by xs, at their common level."""
    if not xs:
        raise PreconditionError("empty list")
    N = xs[0].level
    if any(x.level != N for x in xs):
        raise PreconditionError("mixed levels")
    g = 1
    for p, _, _ in arith.prime_power_parts(N) if N > 1 else []:
        g *= p ** min(valuation(x, p).k for x in xs)
    return TruncatedProfinite(N, g % N)


def unit_coset_decomposition(a: int, b: int) -> list[tuple[int, int, int]]:
    """Local factors (p, v_p(b), a mod p^v_p(b)); unlisted primes are full."""
    if b < 1:
        raise PreconditionError("modulus must be positive")
    if b == 1:
        return []
    return [(p, e, a % q) for p, e, q in arith.prime_power_parts(b)]


@dataclass(frozen=True)
class ClopenSet:
    """The preimage in Zhat of a residue set at level N."""

    members: ResidueSet

    @property
    def N(self) -> int:
        return self.members.modulus

    @classmethod
    def coset(cls, a: int, n: int, N: int | None = None) -> "ClopenSet":
        N = n if N is None else N
        if N % n:
            raise PreconditionError(f"{n} does not divide {N}")
        return cls(ResidueSet(N, lift_mask(1 << (a % n), n, N)))

    @classmethod
    def whole(cls) -> "ClopenSet":
        return cls(ResidueSet.full(1))

    def at(self, N: int) -> "ClopenSet":
        return ClopenSet(self.members.lift(N))

    def _common(self, other: "ClopenSet"):
        N = lcm(self.N, other.N)
        return self.members.lift(N), other.members.lift(N)

    def __or__(self, other):
        a, b = self._common(other)
        return ClopenSet(a | b)

    def __and__(self, other):
        a, b = self._common(other)
        return ClopenSet(a & b)

    def __sub__(self, other):
        a, b = self._common(other)
        return ClopenSet(a - b)

    def translate(self, c: int) -> "ClopenSet":
        N = self.N
        return ClopenSet(ResidueSet.of(N, sorted((x + c) % N for x in self.members)))

    def to_json(self) -> dict:
        return {"N": self.N, "members": self.members.members()}

    @classmethod
    def from_json(cls, data: dict | str) -> "ClopenSet":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(ResidueSet.of(int(data["N"]), data["members"]))


def haar_measure(S: ClopenSet) -> Fraction:
    return Fraction(len(S.members), S.N)


def orbit_set(a: int, n: int) -> ClopenSet:
    """Closure of the unit orbit of [a]_n: dZhat minus p^(v_p(d)+1)Zhat for p | n."""
    d = gcd(a, n)
    out = ClopenSet.coset(0, d)
    for p in arith.support(n) if n > 1 else []:
        out = out - ClopenSet.coset(0, p ** (arith.vp(d, p) + 1))
    return out


def euler_unit_measure(P: int) -> Fraction:
    """Haar measure of the units at level prod_{p <= P} p."""
    if P < 2:
        raise PreconditionError("bound must be at least 2")
    num = den = 1
    for p in primes_up_to(P).tolist():
        num *= p - 1
        den *= p
    return Fraction(num, den)


def prime_residues(n: int, limit: int) -> ResidueSet:
    if n < 1 or limit < n:
        raise PreconditionError("need limit >= n >= 1")
    primes = primes_up_to(limit)
    hit = np.unique(primes % n)
    return ResidueSet.of(n, (int(r) for r in hit))


def dirichlet_check(n: int, limit: int) -> bool:
    """Primes up to limit hit every unit mod n and nothing else but prime divisors."""
    expected = {x for x in range(n) if gcd(x, n) == 1}
    expected |= {q % n for q in (arith.support(n) if n > 1 else []) if q <= limit}
    return prime_residues(n, limit) == ResidueSet.of(n, expected)


def golomb_pi_measure(a: int, b: int) -> Fraction:
    if b < 1:
        raise PreconditionError("modulus must be positive")
    return Fraction(1, arith.phi(b)) if gcd(a, b) == 1 else Fraction(0)


@dataclass(frozen=True)
class PrimeDensity:
    count: int
    total: int
    t: int
    absolute: Fraction
    relative: Fraction

    def to_json(self, decimal: bool = False) -> dict:
        out = {
            "count": self.count,
            "total": self.total,
            "absolute": _ratio(self.absolute),
            "relative": _ratio(self.relative),
        }
        if decimal:
            out["absolute_decimal"] = decimal12(self.absolute)
            out["relative_decimal"] = decimal12(self.relative)
        return out


def _ratio(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decimal12(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 40
        return f"{Decimal(q.numerator) / Decimal(q.denominator):.12f}"


def _log_fraction(t: int) -> Fraction:
    with localcontext() as ctx:
        ctx.prec = 40
        return Fraction(Decimal(t).ln())


def empirical_prime_density(a: int, b: int, t: int) -> PrimeDensity:
    """Counts of primes p <= t in a + bN against t/log t and against pi(t)."""
    if b < 1 or t < 100:
        raise PreconditionError("need b >= 1 and t >= 100")
    primes = primes_up_to(t)
    mask = (primes % b) == (a % b)
    mask &= primes >= a
    count = int(mask.sum())
    total = len(primes)
    absolute = Fraction(count) * _log_fraction(t) / t
    return PrimeDensity(count, total, t, absolute, Fraction(count, total))


def compactification_member(fam, assignment: dict[int, int], N: int) -> bool:
    """Level-N shadow of membership in the closure of Z for the family's topology.

    True iff some z mod N lies in the minimal open set of assignment[n] at
    every divisor n of N.  This is necessary in general and exact when N is
    a determining level for the divisors queried.
    """
    from .peiji import topology_at

    bits = full_mask(N)
    for n in arith.divisors(N):
        if n not in assignment:
            raise PreconditionError(f"assignment misses divisor {n}")
        U = topology_at(fam, n).table[assignment[n] % n]
        bits &= lift_mask(U, n, N)
    return bits != 0


def rho_truncated(x: TruncatedProfinite) -> dict[int, Valuation]:
    N = x.level
    return {p: valuation(x, p) for p in (arith.support(N) if N > 1 else [])}


def large_prime_factor_certificate(a: int, n: int, limit: int) -> tuple[int, int] | None:
    """Some x = a mod n with 1 < x < limit having a prime factor p > n, as (x, p)."""
    start = a % n
    while start <= 1:
        start += n
    for x in range(start, limit, n):
        p = max(arith.factorize(x))
        if p > n:
            return x, p
    return None


def support_within(values: Iterable[int], prime_limit: int) -> list[int]:
    """Primes up to the limit dividing at least one of the values."""
    primes = primes_up_to(prime_limit)
    hit = np.zeros(len(primes), dtype=bool)
    for v in values:
        v = abs(int(v))
        if v < 2**62:
            hit |= (v % primes) == 0
        else:
            hit |= np.array([v % int(p) == 0 for p in primes])
    return [int(p) for p in primes[hit]]

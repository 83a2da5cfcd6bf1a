"""Golomb systems (B, kappa) on the integers.

A system fixes, for every prime p, an exponent gamma(p) and a base set
B_{p^gamma} of residues.  Cores at other prime powers are preimages (above
gamma) or images (below), and B_n is the Chinese-remainder intersection.
Infinitely many primes are covered by a default rule plus finite overrides.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Iterable

from . import arith
from .errors import PreconditionError
from .finite_topology import (
    FiniteTopology,
    ResidueSet,
    closure,
    from_subbase,
    full_mask,
    is_open,
    lift_mask,
    project_mask,
    require_table_level,
)
from .sieve import prime_list

INF = math.inf
RULES = ("zero", "units", "sqrt_interval", "complement")
_DUAL_RULE = {"zero": "units", "units": "zero", "sqrt_interval": "complement", "complement": "sqrt_interval"}


@lru_cache(maxsize=None)
def _primes_for_index(limit: int) -> list[int]:
    return prime_list(limit)


def prime_index(p: int) -> int:
    """1-based position of the prime p (2 -> 1, 3 -> 2, 5 -> 3, ...)."""
    limit = 1 << max(10, p.bit_length() + 1)
    primes = _primes_for_index(limit)
    i = bisect_right(primes, p)
    if i == 0 or primes[i - 1] != p:
        raise PreconditionError(f"{p} is not prime")
    return i


def sqrt_interval(p: int) -> frozenset[int]:
    """Residues mod p with a representative r satisfying |r| <= sqrt(p) - 1."""
    k = isqrt(p) - 1
    return frozenset(r % p for r in range(-k, k + 1))


@lru_cache(maxsize=4096)
def _default_base(rule: str, p: int) -> frozenset[int]:
    if rule == "zero":
        return frozenset({0})
    if rule == "units":
        return frozenset(range(1, p))
    x = sqrt_interval(p)
    # odd-indexed primes keep X_p, even-indexed primes take its complement
    if prime_index(p) % 2 == 0:
        x = frozenset(range(p)) - x
    if rule == "complement":
        x = frozenset(range(p)) - x
    return x


def _is_full_preimage(base: frozenset[int], p: int, gamma: int) -> bool:
    q = p ** (gamma - 1)
    return all((r + q * t) % p**gamma in base for r in base for t in range(p))


@dataclass(frozen=True)
class GolombSystemSpec:
    default: str = "zero"
    overrides: tuple[tuple[int, int, frozenset[int]], ...] = ()

    def __post_init__(self):
        if self.default not in RULES:
            raise PreconditionError(f"unknown default rule {self.default!r}")
        seen = set()
        ordered = []
        for p, gamma, base in self.overrides:
            if not arith.is_prime(p) or p in seen:
                raise PreconditionError(f"bad override prime {p}")
            seen.add(p)
            q = p**gamma
            base = frozenset(base)
            if not base or any(not 0 <= r < q for r in base):
                raise PreconditionError(f"base set at {p}^{gamma} must be a nonempty set of residues")
            if gamma >= 1 and len(base) == q:
                raise PreconditionError(f"base set at {p}^{gamma} must be proper")
            if gamma >= 2 and _is_full_preimage(base, p, gamma):
                raise PreconditionError(f"gamma at {p} is not minimal")
            ordered.append((p, gamma, base))
        object.__setattr__(self, "overrides", tuple(sorted(ordered)))

    @classmethod
    def with_overrides(cls, default: str, overrides: dict[int, tuple[int, Iterable[int]]]):
        return cls(default, tuple((p, g, frozenset(b)) for p, (g, b) in overrides.items()))

    def _override(self, p: int):
        for q, gamma, base in self.overrides:
            if q == p:
                return gamma, base
        return None

    def base(self, p: int) -> tuple[int, frozenset[int]]:
        """(gamma(p), B at p^gamma)."""
        o = self._override(p)
        if o is not None:
            return o
        return 1, _default_base(self.default, p)

    def gamma(self, p: int) -> int:
        return self.base(p)[0]

    def override_primes(self) -> list[int]:
        return [p for p, _, _ in self.overrides]

    def local_core(self, p: int, r: int) -> frozenset[int]:
        """B at p^r."""
        gamma, base = self.base(p)
        if r >= gamma:
            q = p**gamma
            return frozenset(x for x in range(p**r) if x % q in base)
        return frozenset(x % p**r for x in base)

    def in_local_core(self, a: int, p: int, r: int) -> bool:
        gamma, base = self.base(p)
        if r >= gamma:
            return a % p**gamma in base
        q = p**r
        return any((x - a) % q == 0 for x in base)

    def to_json(self) -> dict:
        return {
            "default": self.default,
            "overrides": [
                {"p": p, "gamma": g, "B": sorted(b)} for p, g, b in self.overrides
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "GolombSystemSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data.get("default", "zero"),
            tuple(
                (int(o["p"]), int(o["gamma"]), frozenset(int(x) for x in o["B"]))
                for o in data.get("overrides", [])
            ),
        )


def _parse_exp(v) -> float | int:
    if v in ("inf", "infinity", INF):
        return INF
    v = int(v)
    if v < 0:
        raise PreconditionError("exponent caps are natural numbers")
    return v


@dataclass(frozen=True)
class KirchFunction:
    """Per-prime exponent cap kappa; ``INF`` means uncapped."""

    default: float | int = INF
    overrides: tuple[tuple[int, float | int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "default", _parse_exp(self.default))
        items = dict(self.overrides)
        object.__setattr__(
            self, "overrides", tuple(sorted((int(p), _parse_exp(v)) for p, v in items.items()))
        )

    def __call__(self, p: int) -> float | int:
        for q, v in self.overrides:
            if q == p:
                return v
        return self.default

    def to_json(self) -> dict:
        enc = lambda v: "inf" if v == INF else int(v)  # noqa: E731
        return {
            "default": enc(self.default),
            "overrides": {str(p): enc(v) for p, v in self.overrides},
        }

    @classmethod
    def from_json(cls, data) -> "KirchFunction":
        if isinstance(data, (int, str)) and not str(data).startswith("{"):
            return cls(data)
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data.get("default", "inf"), tuple(data.get("overrides", {}).items()))


GOLOMB_KAPPA = KirchFunction(INF)
KIRCH_KAPPA = KirchFunction(1)


def effective_kappa(spec: GolombSystemSpec, kappa: KirchFunction, p: int) -> float | int:
    gamma = spec.gamma(p)
    if gamma == 0:
        return 0
    k = kappa(p)
    if k < gamma:
        raise PreconditionError(f"kappa({p}) = {k} is below gamma({p}) = {gamma}")
    return k


def core_at(spec: GolombSystemSpec, n: int) -> ResidueSet:
    """B_n as the intersection of the pulled-back prime-power cores."""
    if n < 1:
        raise PreconditionError("level must be positive")
    bits = full_mask(n)
    for p, e, q in arith.prime_power_parts(n) if n > 1 else []:
        local = 0
        for x in spec.local_core(p, e):
            local |= 1 << x
        bits &= lift_mask(local, q, n)
    return ResidueSet(n, bits)


def core_closed_set_truncated(spec: GolombSystemSpec, N: int) -> ResidueSet:
    """Level-N shadow of the closed core B; cross-checked against the CRT product."""
    from .profinite import crt_join_residue

    direct = core_at(spec, N)
    parts = arith.prime_power_parts(N) if N > 1 else []
    members = {0} if not parts else set()
    if parts:
        import itertools

        locals_ = [sorted(spec.local_core(p, e)) for p, e, _ in parts]
        mods = [q for _, _, q in parts]
        for combo in itertools.product(*locals_):
            members.add(crt_join_residue(list(combo), mods))
    product = ResidueSet.of(N, members)
    if product != direct:
        raise AssertionError("core disagrees with the CRT product of local cores")
    return direct


def in_G_a(spec: GolombSystemSpec, a: int, n: int) -> bool:
    """Every prime-power component of a at n lies outside the local core."""
    if n < 1:
        raise PreconditionError("level must be positive")
    return all(not spec.in_local_core(a, p, e) for p, e, _ in _parts(n))


def _parts(n: int):
    return arith.prime_power_parts(n) if n > 1 else []


def coset_open(spec: GolombSystemSpec, kappa: KirchFunction, a: int, n: int) -> bool:
    if n == 1:
        return True
    if not in_G_a(spec, a, n):
        return False
    return all(e <= effective_kappa(spec, kappa, p) for p, e, _ in _parts(n))


def topology_at(spec: GolombSystemSpec, kappa: KirchFunction, n: int) -> FiniteTopology:
    """Level-n member of the maximal family of the topology."""
    require_table_level(n)
    full = full_mask(n)
    factors = []
    for p, e, _ in _parts(n):
        r = min(e, effective_kappa(spec, kappa, p))
        if r == 0:
            continue
        q = p**r
        core = spec.local_core(p, r)
        rows = [full if x in core else lift_mask(1 << x, q, n) for x in range(q)]
        factors.append((q, rows))
    table = []
    for x in range(n):
        mask = full
        for q, rows in factors:
            mask &= rows[x % q]
        table.append(mask)
    return FiniteTopology(n, tuple(table))


def hausdorff_witness(
    spec: GolombSystemSpec, kappa: KirchFunction, a: int, b: int, prime_bound: int
) -> tuple[int, int] | None:
    """Least (p, r) separating a and b by disjoint open cosets mod p^r."""
    if a == b:
        raise PreconditionError("points must differ")
    for p in prime_list(prime_bound):
        gamma, base = spec.base(p)
        if gamma == 0:
            continue
        q = p**gamma
        if a % q in base or b % q in base:
            continue
        r = max(gamma, arith.vp(a - b, p) + 1)
        if r <= effective_kappa(spec, kappa, p):
            return p, r
    return None


def validate_hausdorff(spec, kappa, a: int, b: int, p: int, r: int) -> bool:
    """Raw check of a separating prime power."""
    q = p**r
    return (
        spec.gamma(p) <= r <= effective_kappa(spec, kappa, p)
        and (a - b) % q != 0
        and not spec.in_local_core(a, p, r)
        and not spec.in_local_core(b, p, r)
    )


def dual(spec: GolombSystemSpec) -> GolombSystemSpec:
    """Complement every base set; defined when all gammas are 0 or 1."""
    overrides = []
    for p, gamma, base in spec.overrides:
        if gamma >= 2:
            raise PreconditionError(f"duality needs gamma <= 1, gamma({p}) = {gamma}")
        overrides.append((p, gamma, base if gamma == 0 else frozenset(range(p)) - base))
    return GolombSystemSpec(_DUAL_RULE[spec.default], tuple(overrides))


@dataclass(frozen=True)
class CosetClass:
    tag: str
    p: int | None = None
    exponent: int | None = None

    def to_json(self) -> dict:
        out: dict = {"class": self.tag}
        if self.p is not None:
            out["p"] = self.p
            out["exponent"] = self.exponent
        return out


def classify_coset(spec: GolombSystemSpec, a: int, n: int) -> CosetClass:
    """Superconnected when [a]_n is in the core, otherwise a splitting prime."""
    for p, e, _ in _parts(n):
        if not spec.in_local_core(a, p, e):
            return CosetClass("totally_separated", p, e)
    return CosetClass("superconnected")


def superconnect_witness(
    spec: GolombSystemSpec, kappa: KirchFunction, a: int, n: int, opens: list
) -> int:
    """b = a mod n lying in the core at m = n * lcm(moduli of opens)."""
    if a % n not in core_at(spec, n):
        raise PreconditionError(f"[{a}]_{n} is not in the core")
    for U in opens:
        if not coset_open(spec, kappa, U.a, U.b):
            raise PreconditionError(f"{U.a} + {U.b}Z is not open")
        if (U.a - a) % gcd(U.b, n):
            raise PreconditionError(f"{U.a} + {U.b}Z misses {a} + {n}Z")
    m = n * arith.lcm_all(U.b for U in opens)
    residues, moduli = [], []
    for p, e, q in _parts(m):
        f = arith.vp(n, p) if n % p == 0 else 0
        step = p**f
        choice = next(
            (x for x in range(a % step, q, step) if spec.in_local_core(x, p, e)), None
        )
        if choice is None:
            raise AssertionError(f"no core lift at {p}^{e}")
        residues.append(choice)
        moduli.append(q)
    b = arith.crt(residues, moduli)[0] if moduli else 0
    T = topology_at(spec, kappa, m)
    if (b - a) % n or b not in core_at(spec, m):
        raise AssertionError("witness failed verification")
    for U in opens:
        if b not in closure(T, U.residues(m)):
            raise AssertionError("witness outside a closure")
    return b


@dataclass(frozen=True)
class DisconnectCover:
    p: int
    covered: object
    pieces: tuple = field(default_factory=tuple)

    def split(self):
        """Two disjoint open sets covering ``covered``."""
        return [self.pieces[0]], list(self.pieces[1:])


def disconnect_cover(
    spec: GolombSystemSpec, kappa: KirchFunction, a: int, n: int, prime_bound: int = 1000
) -> DisconnectCover:
    """Split a + nZ (or a + pnZ) into p disjoint relatively open cosets."""
    from .peiji import APSet

    def ambient_open(b: int, p: int, e: int) -> bool:
        return coset_open(spec, kappa, b, p**e)

    for p, e, _ in _parts(n):
        if spec.in_local_core(a, p, e) or e + 1 > effective_kappa(spec, kappa, p):
            continue
        pieces = tuple(APSet(a + i * n, p * n) for i in range(p))
        if all(ambient_open(U.a, p, e + 1) for U in pieces):
            return DisconnectCover(p, APSet(a, n), pieces)
    for p in prime_list(prime_bound):
        if effective_kappa(spec, kappa, p) != INF or spec.in_local_core(a, p, 1):
            continue
        pieces = tuple(APSet(a + i * p * n, p * p * n) for i in range(p))
        if all(coset_open(spec, kappa, U.a, U.b) for U in pieces):
            return DisconnectCover(p, APSet(a, p * n), pieces)
    raise PreconditionError("no splitting prime")


def locally_connected(kappa: KirchFunction) -> bool:
    return kappa.default != INF and all(v != INF for _, v in kappa.overrides)


# brute-force oracle


def saturation_level(spec: GolombSystemSpec, kappa: KirchFunction, n: int) -> int:
    primes = set(_p for _p, _, _ in _parts(n)) | set(spec.override_primes())
    primes |= {2, 3, 5, 7, 11, 13}
    M = n
    for p in sorted(primes):
        e = arith.vp(n, p) if n % p == 0 else 0
        cap = min(effective_kappa(spec, kappa, p), max(e, spec.gamma(p)) + 1)
        M = lcm(M, p ** int(cap))
    return M


def _local_subbase_topology(spec, kappa, p: int, k: int) -> FiniteTopology:
    """Topology on Z/p^k generated by the open prime-power cosets of definition."""
    Q = p**k
    sets = []
    top = min(k, effective_kappa(spec, kappa, p))
    for r in range(spec.gamma(p), int(top) + 1):
        if r == 0:
            continue
        q = p**r
        core = spec.local_core(p, r)
        for c in range(q):
            if c not in core:
                sets.append(ResidueSet(Q, lift_mask(1 << c, q, Q)))
    return from_subbase(Q, sets)


def _local_point_open(spec, kappa, x: int, p: int, k: int, e: int) -> bool:
    """Some defining coset x + p^r Z (r <= k) through x lies inside x + p^e Z."""
    top = min(k, effective_kappa(spec, kappa, p))
    return any(
        not spec.in_local_core(x, p, r) for r in range(max(e, spec.gamma(p), 1), int(top) + 1)
    )


def coset_open_bruteforce(
    spec: GolombSystemSpec, kappa: KirchFunction, a: int, n: int, M: int | None = None
) -> bool:
    """Openness of the image of a + nZ at the saturation level M.

    The level-M topology is generated by prime-power cosets, each depending
    on a single Chinese-remainder coordinate, so it is the product of the
    per-prime generated topologies.  Small factors are materialized from the
    defining subbase; large ones are checked point by point.
    """
    from .config import settings

    M = saturation_level(spec, kappa, n) if M is None else M
    if M % n:
        raise PreconditionError("level must be a multiple of n")
    for p, k, Q in _parts(M):
        e = arith.vp(n, p) if n % p == 0 else 0
        q = p**e
        if Q <= settings.quadratic_limit:
            T = _local_subbase_topology(spec, kappa, p, k)
            if not is_open(T, ResidueSet(Q, lift_mask(1 << (a % q), q, Q))):
                return False
        elif not all(_local_point_open(spec, kappa, x, p, k, e) for x in range(a % q, Q, q)):
            return False
    return True


def coset_open_materialized(
    spec: GolombSystemSpec, kappa: KirchFunction, a: int, n: int, M: int
) -> bool:
    """Openness of pi_M(a + nZ) in the full level-M topology table."""
    T = topology_at(spec, kappa, M)
    bits = lift_mask(1 << (a % n), n, M)
    return is_open(T, ResidueSet(M, bits))


def project_core(spec: GolombSystemSpec, n: int) -> ResidueSet:
    """B_n computed as the image of B at n~ = prod p^max(v_p(n), gamma)."""
    nt = 1
    for p, e, _ in _parts(n):
        nt *= p ** max(e, spec.gamma(p))
    return ResidueSet(n, project_mask(core_at(spec, nt).bits, nt, n))

"""Named coset topologies on Z and their finite quotients.

Each family is described by a ``FamilySpec``.  ``topology_at`` returns the
quotient topology on Z/nZ of the topology the family induces on Z (the
member of the maximal family); ``raw_topology_at`` returns the level
topologies as originally written down, which need not be maximal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, gcd, lcm
from typing import Iterable

from . import arith
from .config import settings
from .errors import BoundExceeded, PreconditionError
from .finite_topology import (
    FiniteTopology,
    ResidueSet,
    closure,
    from_local_factors,
    from_subbase,
    full_mask,
    indiscrete_core,
    is_open,
    lift_mask,
    map_properties,
    quotient,
    repunit,
    require_table_level,
)

KINDS = (
    "furstenberg",
    "kp",
    "golomb",
    "kirch",
    "rizza",
    "szczuka",
    "zero_divisor",
    "broughan_m",
    "custom",
)


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    m: int | None = None
    levels: tuple[tuple[int, FiniteTopology], ...] = ()
    L: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown family {self.kind!r}")
        if self.kind == "broughan_m" and (self.m is None or self.m < 1):
            raise PreconditionError("BroughanM needs m >= 1")
        if self.kind == "custom":
            if self.L is None or self.L < 1:
                raise PreconditionError("custom family needs a master modulus L")
            seen = set()
            for n, T in self.levels:
                if self.L % n or T.n != n:
                    raise PreconditionError(f"level {n} does not divide L={self.L}")
                if n in seen:
                    raise PreconditionError(f"duplicate level {n}")
                seen.add(n)

    @classmethod
    def named(cls, name: str) -> "FamilySpec":
        """Parse names such as ``golomb`` or ``broughan:6``."""
        name = name.strip().lower().replace("-", "_")
        aliases = {"zd": "zero_divisor", "furst": "furstenberg"}
        if name.startswith(("broughan:", "m:")):
            return cls("broughan_m", m=int(name.split(":", 1)[1]))
        return cls(aliases.get(name, name))

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "broughan_m":
            out["m"] = self.m
        if self.kind == "custom":
            out["L"] = self.L
            out["levels"] = [T.to_json() for _, T in self.levels]
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> "FamilySpec":
        if isinstance(data, str):
            data = json.loads(data)
        kind = data["kind"]
        if kind == "custom":
            levels = tuple(
                (T.n, T) for T in (FiniteTopology.from_json(d) for d in data["levels"])
            )
            return cls(kind, levels=levels, L=int(data["L"]))
        return cls(kind, m=data.get("m"))


@dataclass(frozen=True)
class APSet:
    """The progression a + bZ, or a + bN when ``naturals`` is set."""

    a: int
    b: int
    naturals: bool = False

    def __post_init__(self):
        if self.b < 1:
            raise PreconditionError("progression step must be positive")

    def residues(self, m: int) -> ResidueSet:
        # the restriction to N hits the same residues as the full coset
        g = gcd(self.b, m)
        return ResidueSet(m, lift_mask(1 << (self.a % g), g, m))

    def contains(self, x: int) -> bool:
        if (x - self.a) % self.b:
            return False
        return not self.naturals or x >= self.a


def six_point_family(L: int = 36) -> FamilySpec:
    """Level 6 carries {0, 1} as its only proper open set; other levels are trivial."""
    if L % 6:
        raise PreconditionError("master modulus must be a multiple of 6")
    T6 = from_subbase(6, [ResidueSet.of(6, [0, 1])])
    return FamilySpec("custom", levels=((6, T6),), L=L)


# prime-power building blocks


def _points_outside(q: int, closed: Iterable[int]) -> FiniteTopology:
    closed = set(closed)
    return FiniteTopology.from_open_points(q, (x for x in range(q) if x not in closed))


def _local_golomb(p: int, q: int) -> FiniteTopology:
    return _points_outside(q, range(0, q, p))


def _local_szczuka(p: int, q: int) -> FiniteTopology:
    return FiniteTopology.from_open_points(q, range(0, q, p))


def _local_kirch(p: int, q: int) -> FiniteTopology:
    full = full_mask(q)
    table = tuple(lift_mask(1 << (x % p), p, q) if x % p else full for x in range(q))
    return FiniteTopology(q, table)


def _local_broughan(m: int):
    def build(p: int, q: int) -> FiniteTopology:
        return FiniteTopology.discrete(q) if m % p == 0 else _local_golomb(p, q)

    return build


def _crt_family(n: int, local) -> FiniteTopology:
    if n == 1:
        return FiniteTopology.discrete(1)
    return from_local_factors(n, [local(p, q) for p, _, q in arith.prime_power_parts(n)])


def _rizza(n: int) -> FiniteTopology:
    rows = {d: repunit(d, n) for d in arith.divisors(n)}
    return FiniteTopology(n, tuple(rows[gcd(x, n)] for x in range(n)))


def _unit_points(n: int) -> list[int]:
    return [x for x in range(n) if gcd(x, n) == 1]


@lru_cache(maxsize=4096)
def topology_at(fam: FamilySpec, n: int) -> FiniteTopology:
    """Quotient topology at Z/nZ of the family's topology on Z."""
    require_table_level(n)
    k = fam.kind
    if k == "furstenberg":
        return FiniteTopology.discrete(n)
    if k == "kp":
        return FiniteTopology.from_open_points(n, range(1, n))
    if k == "golomb":
        return _crt_family(n, _local_golomb)
    if k == "kirch":
        return _crt_family(n, _local_kirch)
    if k == "szczuka":
        return _crt_family(n, _local_szczuka)
    if k == "broughan_m":
        return _crt_family(n, _local_broughan(fam.m))
    if k == "rizza":
        return _rizza(n)
    if k == "zero_divisor":
        # every integer other than +-1 has a zero-divisor neighbourhood a + n|a|Z
        return FiniteTopology.from_open_points(
            n, (x for x in range(n) if x not in (1 % n, -1 % n))
        )
    if fam.L % n:
        raise PreconditionError(f"level {n} does not divide L={fam.L}")
    return quotient(generated_topology(fam, fam.L), n)


@lru_cache(maxsize=4096)
def raw_topology_at(fam: FamilySpec, n: int) -> FiniteTopology:
    """Level topology as defined, before passing to the maximal family."""
    require_table_level(n)
    k = fam.kind
    if k == "golomb":
        return FiniteTopology.from_open_points(n, _unit_points(n))
    if k == "kirch":
        if arith.is_prime(n):
            return FiniteTopology.from_open_points(n, range(1, n))
        return FiniteTopology.indiscrete(n)
    if k == "rizza":
        return from_subbase(n, [ResidueSet.of(n, [0])])
    if k == "szczuka":
        return FiniteTopology.from_open_points(n, arith.nilpotents(n) if n > 1 else [])
    if k == "zero_divisor":
        return FiniteTopology.from_open_points(
            n, (x for x in range(n) if gcd(x, n) > 1)
        )
    if k == "broughan_m":
        sm = set(arith.support(fam.m)) if fam.m > 1 else set()
        sn = arith.support(n) if n > 1 else []
        return FiniteTopology.from_open_points(
            n, (x for x in range(n) if all(x % p or p in sm for p in sn))
        )
    if k == "custom":
        if fam.L % n:
            raise PreconditionError(f"level {n} does not divide L={fam.L}")
        for level, T in fam.levels:
            if level == n:
                return T
        return FiniteTopology.indiscrete(n)
    return topology_at(fam, n)


def generated_topology(fam: FamilySpec, L: int) -> FiniteTopology:
    """Topology at L generated by pulling back every raw level dividing L."""
    require_table_level(L)
    sets = []
    for d in arith.divisors(L):
        T = raw_topology_at(fam, d)
        for mask in set(T.table):
            sets.append(ResidueSet(L, lift_mask(mask, d, L)))
    return from_subbase(L, sets)


def coset_open(fam: FamilySpec, a: int, b: int) -> bool:
    """Whether a + bZ is open in the family's topology on Z."""
    if b < 1:
        raise PreconditionError("modulus must be positive")
    if b == 1:
        return True
    k = fam.kind
    if k == "furstenberg":
        return True
    if k == "kp":
        return a % b != 0
    if k == "golomb":
        return gcd(a, b) == 1
    if k == "kirch":
        return gcd(a, b) == 1 and arith.rad(b) == b
    if k == "szczuka":
        return a % arith.rad(b) == 0
    if k == "rizza":
        return a % b == 0
    if k == "zero_divisor":
        return (a - 1) % b != 0 and (a + 1) % b != 0
    if k == "broughan_m":
        return all(a % p or fam.m % p == 0 for p in arith.support(b))
    # custom: every open set is pulled back from level L
    if fam.L % b:
        return False
    T = topology_at(fam, fam.L)
    return is_open(T, APSet(a, b).residues(fam.L))


def _as_residues(S, m: int) -> ResidueSet:
    if isinstance(S, APSet):
        return S.residues(m)
    if isinstance(S, ResidueSet):
        return S.project(m)
    return ResidueSet.of(m, {x % m for x in S})


def closure_mod(fam: FamilySpec, S, m: int) -> ResidueSet:
    """Closure of the image of S in the level-m quotient topology."""
    return closure(topology_at(fam, m), _as_residues(S, m))


def dense_mod(fam: FamilySpec, S, m: int) -> bool:
    return closure_mod(fam, S, m).bits == full_mask(m)


@dataclass(frozen=True)
class BrownReport:
    B1: bool
    B2: bool
    B_n: ResidueSet
    B_nk: ResidueSet

    def to_json(self) -> dict:
        return {
            "B1": self.B1,
            "B2": self.B2,
            "B_n": self.B_n.members(),
            "B_nk": self.B_nk.members(),
        }


def brown_conditions(fam: FamilySpec, n: int, k: int) -> BrownReport:
    """Openness of Z/nk -> Z/n and whether it maps core onto core."""
    Tn, Tnk = topology_at(fam, n), topology_at(fam, n * k)
    Bn, Bnk = indiscrete_core(Tn), indiscrete_core(Tnk)
    b1 = map_properties(Tnk, Tn)["open"]
    return BrownReport(b1, Bnk.project(n) == Bn, Bn, Bnk)


def nonmaximality_witness(
    fam: FamilySpec, n: int, level_bound: int
) -> ResidueSet | None:
    """A set open at level n in the induced topology but not in the raw level topology.

    Levels n*k with n*k <= level_bound are tried in increasing order; at each
    level L the topology generated by the raw levels dividing L is pushed
    down to n.  ``None`` means no witness up to the bound.
    """
    if level_bound < n:
        raise PreconditionError("level bound below n")
    raw = raw_topology_at(fam, n)
    for L in range(n, level_bound + 1, n):
        if fam.kind == "custom" and fam.L % L:
            continue
        Q = quotient(generated_topology(fam, L), n)
        for mask in Q.table:
            A = ResidueSet(n, mask)
            if not is_open(raw, A):
                return A
    return None


def broughan_congruence(k: int) -> int:
    """(2 + 2^(5^k)) (3 + 3^(5^k)) mod 5."""
    e = 5**k
    return (2 + pow(2, e, 5)) * (3 + pow(3, e, 5)) % 5


@dataclass(frozen=True)
class ZDSeparation:
    """Disjoint open sets U = a + level*Z and V = Z - U - {1, -1}."""

    n: int
    level: int
    U: APSet
    checked: int = 0

    def in_U(self, x: int) -> bool:
        return self.U.contains(x)

    def in_V(self, x: int) -> bool:
        return x not in (1, -1) and not self.U.contains(x)


def _zd_neighbourhood(x: int, level: int) -> int:
    """Modulus M with level | M and [x]_M a zero-divisor."""
    return level if x == 0 else lcm(level, abs(x))


def zd_separation_witness(
    a: int, b: int, *, minimal: bool = False, check_bound: int = 1000
) -> ZDSeparation:
    """Separate a and b by disjoint open sets of the zero-divisor topology.

    By default n = |a| + |b| + 1 as in the classical argument.  With
    ``minimal`` the least n >= 2 is used for which a and b are distinct and
    different from +-1 modulo n!; openness then rests on the neighbourhood
    x + lcm(n!, |x|)Z of each point, which is checked on [-check_bound,
    check_bound].
    """
    if a == b:
        raise PreconditionError("points must differ")
    if a in (1, -1) or b in (1, -1):
        raise PreconditionError("+-1 have no proper neighbourhood")
    if minimal:
        n = 2
        while True:
            f = factorial(n)
            if (a - b) % f and all((x - s) % f for x in (a, b) for s in (1, -1)):
                break
            n += 1
    else:
        n = abs(a) + abs(b) + 1
    level = factorial(n)
    if level > settings.level_max:
        raise BoundExceeded(f"{n}! exceeds level_max {settings.level_max}")
    w = ZDSeparation(n, level, APSet(a, level), check_bound)
    _verify_zd(w, a, b)
    return w


def _verify_zd(w: ZDSeparation, a: int, b: int) -> None:
    if not (w.in_U(a) and w.in_V(b)):
        raise AssertionError("separation does not contain the points")
    for x in range(-w.checked, w.checked + 1):
        if x in (1, -1):
            if w.in_U(x) or w.in_V(x):
                raise AssertionError(f"{x} lies in the cover")
            continue
        if w.in_U(x) == w.in_V(x):
            raise AssertionError(f"{x} not in exactly one piece")
        M = _zd_neighbourhood(x, w.level)
        if gcd(x, M) == 1 or M % w.level:
            raise AssertionError(f"bad neighbourhood for {x}")
        if (x - 1) % M == 0 or (x + 1) % M == 0:
            raise AssertionError(f"neighbourhood of {x} meets +-1")

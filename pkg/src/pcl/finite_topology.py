"""Topologies on Z/nZ stored as tables of minimal open sets.

A finite topology is the same thing as a preorder: the minimal open set of
x is the down-set of x.  Residue sets are Python ints used as bitsets, so
unions and intersections are single big-integer operations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .config import settings
from .errors import BoundExceeded, PreconditionError


def _check_level(n: int) -> None:
    if n < 1:
        raise PreconditionError(f"modulus must be positive, got {n}")
    if n > settings.level_max:
        raise BoundExceeded(f"modulus {n} exceeds level_max {settings.level_max}")


def _check_quadratic(n: int) -> None:
    if n > settings.quadratic_limit:
        raise BoundExceeded(
            f"modulus {n} exceeds quadratic_limit {settings.quadratic_limit}"
        )


def require_table_level(n: int) -> None:
    """Refuse, before any work, a level whose topology table is too large."""
    _check_level(n)
    _check_quadratic(n)


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def full_mask(n: int) -> int:
    return (1 << n) - 1


def repunit(d: int, m: int) -> int:
    """Bitmask with bits 0, d, 2d, ... below m (d | m)."""
    return full_mask(m) // full_mask(d)


def lift_mask(bits: int, d: int, m: int) -> int:
    """Preimage under Z/m -> Z/d of a residue set at level d."""
    if d == m:
        return bits
    return bits * repunit(d, m)


def project_mask(bits: int, m: int, d: int) -> int:
    """Image under Z/m -> Z/d of a residue set at level m."""
    if d == m:
        return bits
    low = full_mask(d)
    out = 0
    width = m
    # fold halves while the chunk count stays even, then finish linearly
    while width % (2 * d) == 0 and width > d:
        half = width // 2
        bits = (bits & full_mask(half)) | (bits >> half)
        width = half
    for k in range(width // d):
        out |= (bits >> (k * d)) & low
    return out


@dataclass(frozen=True)
class ResidueSet:
    """A subset of Z/nZ."""

    modulus: int
    bits: int = 0

    def __post_init__(self):
        _check_level(self.modulus)
        if self.bits < 0 or self.bits >> self.modulus:
            raise PreconditionError("members must lie in [0, modulus)")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "ResidueSet":
        bits = 0
        for x in members:
            if not 0 <= x < n:
                raise PreconditionError(f"member {x} outside [0, {n})")
            bits |= 1 << x
        return cls(n, bits)

    @classmethod
    def full(cls, n: int) -> "ResidueSet":
        return cls(n, full_mask(n))

    @classmethod
    def empty(cls, n: int) -> "ResidueSet":
        return cls(n, 0)

    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __iter__(self):
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.modulus and bool(self.bits >> x & 1)

    def _same(self, other: "ResidueSet") -> None:
        if other.modulus != self.modulus:
            raise PreconditionError("modulus mismatch")

    def __and__(self, other: "ResidueSet") -> "ResidueSet":
        self._same(other)
        return ResidueSet(self.modulus, self.bits & other.bits)

    def __or__(self, other: "ResidueSet") -> "ResidueSet":
        self._same(other)
        return ResidueSet(self.modulus, self.bits | other.bits)

    def __sub__(self, other: "ResidueSet") -> "ResidueSet":
        self._same(other)
        return ResidueSet(self.modulus, self.bits & ~other.bits)

    def complement(self) -> "ResidueSet":
        return ResidueSet(self.modulus, full_mask(self.modulus) & ~self.bits)

    def issubset(self, other: "ResidueSet") -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def lift(self, m: int) -> "ResidueSet":
        if m % self.modulus:
            raise PreconditionError(f"{self.modulus} does not divide {m}")
        return ResidueSet(m, lift_mask(self.bits, self.modulus, m))

    def project(self, d: int) -> "ResidueSet":
        if self.modulus % d:
            raise PreconditionError(f"{d} does not divide {self.modulus}")
        return ResidueSet(d, project_mask(self.bits, self.modulus, d))

    def __repr__(self) -> str:
        return f"ResidueSet({self.modulus}, {self.members()})"


@dataclass(frozen=True)
class FiniteTopology:
    """Topology on Z/nZ; ``table[x]`` is the bitmask of the minimal open set of x."""

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        _check_level(self.n)
        _check_quadratic(self.n)
        if len(self.table) != self.n:
            raise PreconditionError("table length must equal the modulus")
        for x, mask in enumerate(self.table):
            if not mask >> x & 1:
                raise PreconditionError(f"minimal open set of {x} omits {x}")

    # constructors

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopology":
        return cls(n, (full_mask(n),) * n)

    @classmethod
    def from_open_points(cls, n: int, points: Iterable[int]) -> "FiniteTopology":
        """Given points are open singletons, every other point sees everything."""
        table = [full_mask(n)] * n
        for x in points:
            table[x] = 1 << x
        return cls(n, tuple(table))

    @classmethod
    def from_table(cls, n: int, sets: Sequence[Iterable[int]]) -> "FiniteTopology":
        t = cls(n, tuple(ResidueSet.of(n, s).bits for s in sets))
        if not t.is_preorder():
            raise PreconditionError("table is not transitive")
        return t

    # accessors

    def min_open(self, x: int) -> ResidueSet:
        return ResidueSet(self.n, self.table[x])

    def is_preorder(self) -> bool:
        for mask in self.table:
            for y in iter_bits(mask):
                if self.table[y] & ~mask:
                    return False
        return True

    def is_finer(self, other: "FiniteTopology") -> bool:
        """Every open set of ``other`` is open here."""
        _same_modulus(self.n, other.n)
        return all(a & ~b == 0 for a, b in zip(self.table, other.table))

    def to_json(self) -> dict:
        return {"n": self.n, "min_open": [list(iter_bits(m)) for m in self.table]}

    @classmethod
    def from_json(cls, data: dict | str) -> "FiniteTopology":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_table(int(data["n"]), data["min_open"])


def _same_modulus(a: int, b: int) -> None:
    if a != b:
        raise PreconditionError(f"modulus mismatch: {a} vs {b}")


def from_subbase(n: int, sets: Iterable[ResidueSet]) -> FiniteTopology:
    """Coarsest topology in which every given set is open."""
    _check_level(n)
    full = full_mask(n)
    table = [full] * n
    for s in sets:
        _same_modulus(s.modulus, n)
        for x in iter_bits(s.bits):
            table[x] &= s.bits
    return FiniteTopology(n, tuple(table))


def is_open(T: FiniteTopology, S: ResidueSet) -> bool:
    _same_modulus(T.n, S.modulus)
    return all(T.table[x] & ~S.bits == 0 for x in iter_bits(S.bits))


def _closure_bits(T: FiniteTopology, bits: int) -> int:
    out = 0
    for x, mask in enumerate(T.table):
        if mask & bits:
            out |= 1 << x
    return out


def closure(T: FiniteTopology, S: ResidueSet) -> ResidueSet:
    _same_modulus(T.n, S.modulus)
    return ResidueSet(T.n, _closure_bits(T, S.bits))


def interior(T: FiniteTopology, S: ResidueSet) -> ResidueSet:
    _same_modulus(T.n, S.modulus)
    out = 0
    for x in iter_bits(S.bits):
        if T.table[x] & ~S.bits == 0:
            out |= 1 << x
    return ResidueSet(T.n, out)


def indiscrete_core(T: FiniteTopology) -> ResidueSet:
    """Points whose only neighbourhood is the whole space."""
    full = full_mask(T.n)
    return ResidueSet(T.n, sum(1 << x for x, m in enumerate(T.table) if m == full))


def connected_components(T: FiniteTopology) -> list[ResidueSet]:
    """Components of the graph joining x to every point of its minimal open set."""
    n = T.n
    _check_quadratic(n)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, mask in enumerate(T.table):
        rx = find(x)
        for y in iter_bits(mask & ~(1 << x)):
            ry = find(y)
            if ry != rx:
                parent[ry] = rx
    blocks: dict[int, int] = {}
    for x in range(n):
        r = find(x)
        blocks[r] = blocks.get(r, 0) | 1 << x
    comps = [ResidueSet(n, b) for b in blocks.values()]
    return sorted(comps, key=lambda s: (s.bits & -s.bits).bit_length())


def quotient_table(
    table: Sequence[int], proj: Sequence[int], size: int
) -> tuple[int, ...]:
    """Quotient preorder of ``table`` along the surjection x -> proj[x].

    A target set A is open iff its preimage is open; the minimal open set of
    y is found by saturating {y} until its preimage is a union of minimal
    open sets.
    """
    fibres = [0] * size
    for x, y in enumerate(proj):
        fibres[y] |= 1 << x
    out = []
    for y in range(size):
        target = 1 << y
        while True:
            pre = 0
            for t in iter_bits(target):
                pre |= fibres[t]
            hull = 0
            for x in iter_bits(pre):
                hull |= table[x]
            image = 0
            for x in iter_bits(hull & ~pre):
                image |= 1 << proj[x]
            if image & ~target == 0:
                break
            target |= image
        out.append(target)
    return tuple(out)


def quotient(T: FiniteTopology, n: int) -> FiniteTopology:
    """Quotient topology along Z/m -> Z/n."""
    m = T.n
    if n < 1 or m % n:
        raise PreconditionError(f"{n} does not divide {m}")
    if n == m:
        return T
    return FiniteTopology(n, quotient_table(T.table, [x % n for x in range(m)], n))


def product_table(A: FiniteTopology, B: FiniteTopology) -> tuple[int, ...]:
    """Product preorder on Z/a x Z/b, pairs (x, y) indexed as x*b + y."""
    b = B.n
    rows = []
    for x in range(A.n):
        for y in range(b):
            mask = 0
            for u in iter_bits(A.table[x]):
                mask |= B.table[y] << (u * b)
            rows.append(mask)
    return tuple(rows)


def crt_combine(Ta: FiniteTopology, Tb: FiniteTopology) -> FiniteTopology:
    """Product topology carried to Z/ab by the Chinese remainder isomorphism."""
    from math import gcd

    a, b = Ta.n, Tb.n
    if gcd(a, b) != 1:
        raise PreconditionError(f"moduli {a} and {b} are not coprime")
    return from_local_factors(a * b, [Ta, Tb])


def from_local_factors(n: int, factors: Sequence[FiniteTopology]) -> FiniteTopology:
    """Combine topologies at pairwise coprime moduli whose product is n."""
    lifted = []
    for T in factors:
        lifted.append((T.n, [lift_mask(m, T.n, n) for m in T.table]))
    full = full_mask(n)
    table = []
    for x in range(n):
        mask = full
        for q, rows in lifted:
            mask &= rows[x % q]
        table.append(mask)
    return FiniteTopology(n, tuple(table))


def map_properties(Tm: FiniteTopology, Tn: FiniteTopology) -> dict[str, bool]:
    """Continuity and openness of the projection Z/m -> Z/n."""
    m, n = Tm.n, Tn.n
    if m % n:
        raise PreconditionError(f"{n} does not divide {m}")
    continuous = all(
        is_open(Tm, ResidueSet(m, lift_mask(mask, n, m))) for mask in Tn.table
    )
    opened = all(
        is_open(Tn, ResidueSet(n, project_mask(mask, m, n))) for mask in Tm.table
    )
    return {"continuous": continuous, "open": opened}


def _rotate(bits: int, k: int, n: int) -> int:
    k %= n
    return ((bits << k) | (bits >> (n - k))) & full_mask(n)


def operation_continuity(T: FiniteTopology, which: str) -> bool:
    """Continuity of addition or multiplication (Z/n)^2 -> Z/n.

    Both operations are commutative, so monotonicity in one argument at a
    time suffices: f(U_x, y) must lie in U_{f(x, y)} for all x, y.
    """
    n = T.n
    _check_quadratic(n)
    if which == "add":
        for x, mask in enumerate(T.table):
            for y in range(n):
                if _rotate(mask, y, n) & ~T.table[(x + y) % n]:
                    return False
        return True
    if which == "mul":
        members = [list(iter_bits(m)) for m in T.table]
        for x in range(n):
            for y in range(n):
                target = T.table[x * y % n]
                for u in members[x]:
                    if not target >> (u * y % n) & 1:
                        return False
        return True
    raise PreconditionError(f"unknown operation {which!r}")


def ring_ideal_base(T: FiniteTopology) -> int | None:
    """Generator d when the open sets are unions of cosets of dZ/nZ and T is a ring topology."""
    n = T.n
    zero = T.table[0]
    d = next((k for k in range(1, n) if zero >> k & 1), n)
    if n % d or zero != repunit(d, n):
        return None
    if operation_continuity(T, "add") and operation_continuity(T, "mul"):
        return d
    return None


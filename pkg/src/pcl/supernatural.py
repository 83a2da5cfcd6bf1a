"""Supernatural numbers prod p^e_p with e_p in N or infinity.

Only numbers whose exponents are eventually 0 or eventually infinite are
representable: finitely many explicit entries plus a tail value.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import arith
from .errors import PreconditionError
from .sieve import prime_list

INF = math.inf


def _exp(v):
    if v in ("inf", INF):
        return INF
    v = int(v)
    if v < 0:
        raise PreconditionError("exponents are natural numbers")
    return v


@dataclass(frozen=True)
class Supernatural:
    entries: tuple[tuple[int, float | int], ...] = ()
    tail: float | int = 0

    def __post_init__(self):
        tail = _exp(self.tail)
        if tail not in (0, INF):
            raise PreconditionError("tail must be 0 or infinity")
        clean = {}
        for p, e in self.entries:
            if not arith.is_prime(p):
                raise PreconditionError(f"{p} is not prime")
            e = _exp(e)
            if e != tail:
                clean[int(p)] = e
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "entries", tuple(sorted(clean.items())))

    @classmethod
    def from_natural(cls, n: int) -> "Supernatural":
        if n == 0:
            raise PreconditionError("use from_zero for 0")
        if n < 0:
            raise PreconditionError("supernaturals are positive")
        return cls(tuple(arith.factorize(n).items()))

    @classmethod
    def from_zero(cls) -> "Supernatural":
        return cls((), INF)

    @classmethod
    def of(cls, exps: dict[int, float | int], tail=0) -> "Supernatural":
        return cls(tuple(exps.items()), tail)

    def v(self, p: int) -> float | int:
        for q, e in self.entries:
            if q == p:
                return e
        return self.tail

    def primes(self) -> list[int]:
        return [p for p, _ in self.entries]

    def is_natural(self) -> bool:
        return self.tail == 0 and all(e != INF for _, e in self.entries)

    def to_int(self) -> int:
        if not self.is_natural():
            raise PreconditionError("not a natural number")
        out = 1
        for p, e in self.entries:
            out *= p**e
        return out

    def __str__(self) -> str:
        if self.is_natural():
            return str(self.to_int())
        parts = [f"{p}^inf" if e == INF else (f"{p}^{e}" if e != 1 else str(p))
                 for p, e in self.entries]
        if self.tail == INF:
            parts.append("P^inf")
        return "*".join(parts) if parts else "1"

    @classmethod
    def parse(cls, text: str) -> "Supernatural":
        """Inverse of ``str``: products like ``2^inf*3``; ``P^inf`` sets the tail."""
        text = text.strip().replace(" ", "")
        if text in ("0", "rho(0)"):
            return cls.from_zero()
        exps: dict[int, float | int] = {}
        tail = 0
        for tok in text.split("*"):
            m = re.fullmatch(r"(\d+|P)(?:\^(\d+|inf))?", tok)
            if not m:
                raise PreconditionError(f"cannot parse {tok!r}")
            base, e = m.group(1), _exp(m.group(2) or 1)
            if base == "P":
                if e != INF:
                    raise PreconditionError("P may only carry the exponent inf")
                tail = INF
                continue
            b = int(base)
            if b == 1:
                continue
            if e == INF:
                if not arith.is_prime(b):
                    raise PreconditionError(f"{b}^inf needs a prime base")
                exps[b] = INF
            else:
                for p, f in arith.factorize(b).items():
                    exps[p] = exps.get(p, 0) + f * e
        if tail == INF:
            return cls(tuple((p, e) for p, e in exps.items()), INF)
        return cls(tuple(exps.items()))

    def to_json(self) -> dict:
        enc = lambda e: "inf" if e == INF else int(e)  # noqa: E731
        return {
            "tail": enc(self.tail) if self.tail == INF else "0",
            "entries": [{"p": p, "e": enc(e)} for p, e in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Supernatural":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple((int(d["p"]), d["e"]) for d in data["entries"]), data["tail"])


def _combine(s: Supernatural, t: Supernatural, op) -> Supernatural:
    primes = set(s.primes()) | set(t.primes())
    return Supernatural(
        tuple((p, op(s.v(p), t.v(p))) for p in primes), op(s.tail, t.tail)
    )


def mul(s: Supernatural, t: Supernatural) -> Supernatural:
    return _combine(s, t, lambda a, b: a + b)


def gcd(s: Supernatural, t: Supernatural) -> Supernatural:
    return _combine(s, t, min)


def lcm(s: Supernatural, t: Supernatural) -> Supernatural:
    return _combine(s, t, max)


def divides(s: Supernatural, t: Supernatural) -> bool:
    if s.tail > t.tail:
        return False
    return all(s.v(p) <= t.v(p) for p in set(s.primes()) | set(t.primes()))


def omega(s: Supernatural) -> float | int:
    return INF if s.tail == INF else len(s.entries)


def big_omega(s: Supernatural) -> float | int:
    if s.tail == INF:
        return INF
    return sum(e for _, e in s.entries)


def local_abundancy(p: int, e: float | int) -> Fraction:
    if e == INF:
        return Fraction(p, p - 1)
    return Fraction(p ** (e + 1) - 1, p**e * (p - 1))


def abundancy(s: Supernatural) -> Fraction | float:
    """sigma(n)/n extended multiplicatively; infinite when the tail is infinite."""
    if s.tail == INF:
        return INF
    out = Fraction(1)
    for p, e in s.entries:
        out *= local_abundancy(p, e)
    return out


class ApproxError(PreconditionError):
    def __init__(self, message: str, achieved: Fraction):
        super().__init__(message)
        self.achieved = achieved


def approx_target(t: Fraction, eps: Fraction, prime_limit: int) -> Supernatural:
    """Greedy squarefree s with |h(s) - t| < eps, scanning primes upward."""
    t, eps = Fraction(t), Fraction(eps)
    if t <= 1 or eps <= 0:
        raise PreconditionError("need t > 1 and eps > 0")
    current = Fraction(1)
    chosen: list[int] = []
    for p in prime_list(prime_limit):
        if abs(current - t) < eps:
            break
        step = current * (p + 1) / p
        if step <= t:
            current = step
            chosen.append(p)
    if abs(current - t) >= eps:
        raise ApproxError(
            f"eps not reached with primes <= {prime_limit}; got {float(current):.12g}",
            current,
        )
    return Supernatural(tuple((p, 1) for p in chosen))


def order_closure_member(s: Supernatural, X: Iterable[Supernatural]) -> bool:
    return any(divides(s, t) for t in X)


def int_divides(x: int, y: int) -> bool:
    """Divisibility in Z: everything divides 0, and 0 divides only 0."""
    if x == 0:
        return y == 0
    return y % x == 0


BUILTINS: dict[str, Callable[[int], int]] = {
    "phi": arith.phi,
    "mu": arith.mobius,
    "sigma": arith.sigma,
    "identity": lambda n: n,
}


def resolve_function(name: str) -> Callable[[int], int]:
    if name in BUILTINS:
        return BUILTINS[name]
    m = re.fullmatch(r"power\((\d+)\)", name)
    if m:
        k = int(m.group(1))
        return lambda n: n**k
    raise PreconditionError(f"unknown function {name!r}")


def divisibility_monotone(
    f: Callable[[int], int] | str | Sequence[int] | dict, bound: int
) -> bool | tuple[int, int]:
    """True if a | b implies f(a) | f(b) for all 1 <= a, b <= bound.

    Otherwise returns the first failing (a, b), scanning b upward and then a.
    Tables may be dicts keyed by 1..bound or sequences indexed from 1.
    """
    if bound < 2:
        raise PreconditionError("bound must be at least 2")
    if isinstance(f, str):
        f = resolve_function(f)
    if isinstance(f, dict):
        if any(k not in f for k in range(1, bound + 1)):
            raise PreconditionError("table does not cover [1, bound]")
        values = [0] + [f[k] for k in range(1, bound + 1)]
    elif callable(f):
        values = [0] + [f(k) for k in range(1, bound + 1)]
    else:
        if len(f) < bound:
            raise PreconditionError("table does not cover [1, bound]")
        values = [0] + list(f[:bound])
    divs: list[list[int]] = [[] for _ in range(bound + 1)]
    for a in range(1, bound + 1):
        for b in range(a, bound + 1, a):
            divs[b].append(a)
    for b in range(1, bound + 1):
        for a in divs[b]:
            if not int_divides(values[a], values[b]):
                return a, b
    return True


@dataclass(frozen=True)
class ConvergenceReport:
    consistent: bool
    stabilization: dict
    refuted_at: tuple[int, int] | None = None


def converges_report(
    seq: Sequence[Supernatural],
    s: Supernatural,
    prime_bound: int,
    threshold: int = 3,
    min_tail: int = 10,
) -> ConvergenceReport:
    """Finite-prefix evidence that v_p(seq_i) tends to v_p(s) for p <= prime_bound.

    For each prime the stabilization index is the start of the final run of
    terms agreeing with the target (at least ``threshold`` when the target
    is infinite), or None if the prefix ends off target.  A final constant
    run of at least ``min_tail`` terms at a wrong value refutes convergence.
    """
    if not seq:
        raise PreconditionError("empty sequence")
    stab: dict[int, int | None] = {}
    for p in prime_list(prime_bound):
        target = s.v(p)
        vals = [x.v(p) for x in seq]
        hits = [v >= threshold if target == INF else v == target for v in vals]
        i = len(vals)
        while i > 0 and hits[i - 1]:
            i -= 1
        if i < len(vals):
            stab[p] = i
            continue
        last = vals[-1]
        j = len(vals)
        while j > 0 and vals[j - 1] == last:
            j -= 1
        if len(vals) - j >= min_tail:
            return ConvergenceReport(False, stab, (p, j))
        stab[p] = None
    return ConvergenceReport(True, stab)

"""The fourteen acceptance criteria, one test each.

Every test records its verdict before asserting, so the terminal summary
lists a pass/fail line per criterion even when some of them fail.
"""

import random
import time
from fractions import Fraction
from itertools import product as cartesian

from oracles import nilpotents, units
from specgen import random_gamma_one_spec, random_spec

from pcl import arith, peiji
from pcl.finite_topology import (
    FiniteTopology,
    ResidueSet,
    from_subbase,
    indiscrete_core,
    operation_continuity,
    product_table,
    quotient,
    quotient_table,
    ring_ideal_base,
)
from pcl.golomb import (
    GOLOMB_KAPPA,
    GolombSystemSpec,
    classify_coset,
    core_at,
    coset_open,
    coset_open_bruteforce,
    dual,
    hausdorff_witness,
    validate_hausdorff,
)
from pcl.profinite import dirichlet_check, empirical_prime_density, euler_unit_measure
from pcl.sieve import prime_list
from pcl.supernatural import Supernatural, abundancy, approx_target, converges_report

F = peiji.FamilySpec


def test_01_dirichlet_shadow(record):
    start = time.perf_counter()
    ok = all(dirichlet_check(n, 10**6) for n in range(1, 201))
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 60
    record(1, f"Dirichlet shadow, n <= 200 at 10^6 ({elapsed:.1f}s)", ok)
    assert ok


def test_02_brown_cores(record):
    bad = []
    for n in range(1, 2001):
        nil, uni = nilpotents(n), units(n)
        for kind, expected in (("golomb", nil), ("kirch", nil), ("szczuka", uni), ("rizza", uni)):
            if set(indiscrete_core(peiji.topology_at(F(kind), n))) != expected:
                bad.append((kind, n))
    record(2, f"Brown cores equal nilpotents/units for n <= 2000 ({len(bad)} mismatches)", not bad)
    assert not bad


def test_03_openness_oracle(record):
    rng = random.Random(20240603)
    start = time.perf_counter()
    disagreements = []
    for _ in range(500):
        spec, kappa = random_spec(rng)
        n = rng.randint(1, 10**4)
        a = rng.randint(-10**6, 10**6)
        if coset_open(spec, kappa, a, n) != coset_open_bruteforce(spec, kappa, a, n):
            disagreements.append((spec, kappa, a, n))
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed < 120
    record(3, f"closed-form openness = saturation-level brute force, 500 cases ({elapsed:.1f}s)", ok)
    assert ok, disagreements[:3]


def test_04_hausdorff_witnesses(record):
    spec = GolombSystemSpec("sqrt_interval")
    failures = []
    for a in range(0, 101):
        for b in range(a + 1, 101):
            w = hausdorff_witness(spec, GOLOMB_KAPPA, a, b, 1000)
            if w is None or w[0] > 1000 or not validate_hausdorff(spec, GOLOMB_KAPPA, a, b, *w):
                failures.append((a, b, w))
                continue
            # raw condition, recomputed from the base sets
            p, r = w
            q = p**r
            gamma, base = spec.base(p)
            raw = (a - b) % q != 0 and a % p**gamma not in base and b % p**gamma not in base
            if not raw:
                failures.append((a, b, w))
    record(4, f"Hausdorff witnesses for 0 <= a < b <= 100 ({len(failures)} failures)", not failures)
    assert not failures


def test_05_szczuka_duality(record):
    rng = random.Random(77)
    failures = []
    for _ in range(200):
        spec = random_gamma_one_spec(rng)
        dspec = dual(spec)
        if dual(dspec) != spec:
            failures.append(("involution", spec))
        for _ in range(10):
            n = rng.randint(1, 2000)
            a = rng.randint(-10**5, 10**5)
            in_core = a % n in core_at(spec, n)
            opened = coset_open(dspec, GOLOMB_KAPPA, a, n)
            superconnected = classify_coset(spec, a, n).tag == "superconnected"
            if not in_core == opened == superconnected:
                failures.append((spec, a, n))
    record(5, f"Szczuka duality on 200 systems ({len(failures)} failures)", not failures)
    assert not failures


def test_06_abundancy_density(record):
    eps = Fraction(1, 10**4)
    details, ok = [], True
    for t in (Fraction(11, 10), Fraction(3, 2), Fraction(2), Fraction(27183, 10000)):
        s = approx_target(t, eps, 10**6)
        h = Fraction(1)
        for p, e in s.entries:
            h *= Fraction(p + 1, p)
            ok = ok and e == 1 and p <= 10**6 and arith.is_prime(p)
        ok = ok and s.tail == 0 and h == abundancy(s) and abs(h - t) < eps
        details.append(f"{t}:{len(s.entries)}p")
    record(6, f"abundancy targets within 1e-4 ({', '.join(details)})", ok)
    assert ok


def test_07_golomb_measure(record):
    worst = Fraction(0)
    for b in (3, 4, 5, 8, 10):
        target = Fraction(1, arith.phi(b))
        for a in range(b):
            if arith.gcd(a, b) == 1:
                d = empirical_prime_density(a, b, 10**6)
                worst = max(worst, abs(d.relative - target))
    ok = worst <= Fraction(1, 100)
    record(7, f"prime density in a + bN vs 1/phi(b) at 10^6 (max error {float(worst):.5f})", ok)
    assert ok


def test_08_euler_unit_measure(record):
    primes = prime_list(10**4)
    values = [euler_unit_measure(p) for p in primes]
    decreasing = all(x > y for x, y in zip(values, values[1:]))
    # independent running product as the reference
    ref, matches = Fraction(1), True
    for p, v in zip(primes, values):
        ref *= 1 - Fraction(1, p)
        matches = matches and ref == v
    final = euler_unit_measure(10**4)
    ok = decreasing and matches and final < Fraction(7, 100) and isinstance(final, Fraction)
    record(8, f"Euler unit measure decreasing, {float(final):.6f} < 0.07 at 10^4", ok)
    assert ok


def test_09_ring_topologies(record):
    G = F("golomb")
    mul_ok = all(operation_continuity(peiji.topology_at(G, n), "mul") for n in range(1, 61))
    add_fails = [n for n in range(1, 11) if not operation_continuity(peiji.topology_at(G, n), "add")]
    furst = all(
        operation_continuity(T, "add") and operation_continuity(T, "mul") and ring_ideal_base(T) == n
        for n in range(1, 61)
        for T in [peiji.topology_at(F("furstenberg"), n)]
    )
    ok = mul_ok and bool(add_fails) and furst
    record(9, f"ring topology checks (addition fails at n = {add_fails[:3]})", ok)
    assert ok


def test_10_zero_divisor_separation(record):
    points = [x for x in range(-20, 21) if x not in (1, -1)]
    failures, worst = [], 0
    for a in points:
        for b in points:
            if a == b:
                continue
            w = peiji.zd_separation_witness(a, b, minimal=True)
            worst = max(worst, w.n)
            ok = w.n <= 9 and w.level == _factorial(w.n) and w.checked
            ok = ok and w.in_U(a) and w.in_V(b) and not w.in_U(b) and not w.in_V(a)
            ok = ok and all(_zd_nbhd_inside(w, x) for x in range(-60, 61) if x not in (1, -1))
            if not ok:
                failures.append((a, b))
    ok = not failures
    record(10, f"zero-divisor separation at level n!, largest n = {worst}", ok)
    assert ok


def _zd_nbhd_inside(w, x):
    """x has an open zero-divisor coset x + MZ inside whichever of U, V holds it."""
    M = w.level if x == 0 else w.level * abs(x) // arith.gcd(w.level, abs(x))
    if not peiji.coset_open(F("zero_divisor"), x, M):
        return False
    if w.in_U(x):
        return True
    return (x - 1) % M != 0 and (x + 1) % M != 0


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_11_maximality(record):
    six_point = peiji.six_point_family()
    b1 = peiji.brown_conditions(six_point, 3, 2).B1
    none_upto_36 = peiji.nonmaximality_witness(six_point, 6, 36) is None
    w = peiji.nonmaximality_witness(F("golomb"), 12, 36)
    ok = b1 is False and none_upto_36 and w is not None and w.members() == [2, 5, 8, 11]
    record(11, "maximality regressions (six-point family, raw Golomb at 12)", ok)
    assert ok


def test_12_broughan_congruence(record):
    ok = all(
        (2 + pow(2, 5**k, 5)) * (3 + pow(3, 5**k, 5)) % 5 == 4 and peiji.broughan_congruence(k) == 4
        for k in range(7)
    )
    record(12, "(2 + 2^(5^k))(3 + 3^(5^k)) = 4 mod 5 for k <= 6", ok)
    assert ok


def _random_topology(rng, n):
    sets = [ResidueSet(n, rng.getrandbits(n)) for _ in range(rng.randint(0, 5))]
    return from_subbase(n, sets)


def test_13_quotient_of_product(record):
    rng = random.Random(13)
    failures = 0
    for _ in range(200):
        A = _random_topology(rng, rng.randint(1, 12))
        B = _random_topology(rng, rng.randint(1, 12))
        n1 = rng.choice(arith.divisors(A.n))
        n2 = rng.choice(arith.divisors(B.n))
        proj = [(x % n1) * n2 + (y % n2) for x, y in cartesian(range(A.n), range(B.n))]
        lhs = quotient_table(product_table(A, B), proj, n1 * n2)
        rhs = product_table(quotient(A, n1), quotient(B, n2))
        failures += lhs != rhs
    record(13, f"quotient of product = product of quotients, 200 cases ({failures} failures)", failures == 0)
    assert failures == 0


def test_14_convergence_shadows(record):
    primes = prime_list(3600)[:500]
    S = Supernatural.from_natural
    r1 = converges_report([S(p) for p in primes], S(1), 50)
    r2 = converges_report([S(_factorial(n)) for n in range(1, 21)], Supernatural.from_zero(), 7, threshold=2)
    seq = [S(10 * p) for p in primes]
    r3 = converges_report(seq, S(10), 100)
    corrupted = seq[:470] + [S(30)] * 30
    r4 = converges_report(corrupted, S(10), 100)
    ok = r1.consistent and r2.consistent and r3.consistent and not r4.consistent and r4.refuted_at == (3, 470)
    record(14, "convergence shadows consistent; corrupted sequence refuted", ok)
    assert ok


def test_acceptance_sanity():
    # the product indexing used above agrees with the library's own pairing
    A, B = FiniteTopology.discrete(2), FiniteTopology.indiscrete(3)
    assert product_table(A, B)[0] == 0b111

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import nilpotents, opens_of, quotient_opens, units

from pcl import arith
from pcl.errors import PreconditionError
from pcl.finite_topology import (
    FiniteTopology,
    ResidueSet,
    closure,
    from_subbase,
    indiscrete_core,
    is_open,
    lift_mask,
)
from pcl.peiji import (
    APSet,
    FamilySpec,
    brown_conditions,
    broughan_congruence,
    closure_mod,
    coset_open,
    dense_mod,
    six_point_family,
    generated_topology,
    nonmaximality_witness,
    raw_topology_at,
    topology_at,
    zd_separation_witness,
)

F = FamilySpec
NAMED = [F(k) for k in ("furstenberg", "kp", "golomb", "kirch", "rizza", "szczuka", "zero_divisor")]
ALL = NAMED + [F("broughan_m", m=6), F("broughan_m", m=5)]


def coset_open_at_level(fam, a, b, L):
    """Openness of a + bZ witnessed by the topology generated from raw levels dividing L."""
    T = generated_topology(fam, L)
    return is_open(T, APSet(a, b).residues(L))


class TestTopologyAt:
    def test_examples(self):
        assert topology_at(F("furstenberg"), 6) == FiniteTopology.discrete(6)
        assert topology_at(F("golomb"), 12).min_open(2).members() == [2, 5, 8, 11]
        kp = topology_at(F("kp"), 4)
        assert kp == from_subbase(4, [ResidueSet.of(4, [x]) for x in (1, 2, 3)])

    def test_custom_rejects_foreign_level(self):
        with pytest.raises(PreconditionError):
            topology_at(six_point_family(36), 5)
        with pytest.raises(PreconditionError):
            F("custom", levels=((5, FiniteTopology.discrete(5)),), L=36)
        with pytest.raises(PreconditionError):
            F("broughan_m", m=0)

    @pytest.mark.parametrize("fam", NAMED[:6] + [F("broughan_m", m=6)], ids=str)
    def test_maximal_member_matches_generated_quotients(self, fam):
        # the level-n quotient of the topology generated by raw levels n*k
        for n in range(1, 13):
            expected = topology_at(fam, n)
            got = FiniteTopology(n, tuple(_quotient_of_generated(fam, n, 4 * n)))
            assert got.is_finer(expected) or fam.kind in ("kp",)
            assert expected.is_finer(got)

    def test_zero_divisor_maximal_member(self):
        # units other than +-1 are open points: a + n|a|Z is a zero-divisor neighbourhood
        T = topology_at(F("zero_divisor"), 10)
        assert T.min_open(3).members() == [3]
        assert T.min_open(9).bits == (1 << 10) - 1
        assert coset_open(F("zero_divisor"), 3, 10)
        assert not coset_open(F("zero_divisor"), 9, 10)

    def test_kp_restriction_matches_furstenberg_off_zero(self):
        for n in range(2, 40):
            T = topology_at(F("kp"), n)
            for x in range(1, n):
                assert T.min_open(x).members() == [x]

    def test_broughan_levels(self):
        for m in (1, 2, 6, 10, 12):
            fam = F("broughan_m", m=m)
            for p in (2, 3, 5, 7):
                for r in (1, 2, 3):
                    T = topology_at(fam, p**r)
                    if m % p == 0:
                        assert T == FiniteTopology.discrete(p**r)
                    else:
                        assert T == topology_at(F("golomb"), p**r)


def _quotient_of_generated(fam, n, L):
    from pcl.finite_topology import quotient

    return quotient(generated_topology(fam, L), n).table


class TestCosetOpen:
    def test_examples(self):
        assert coset_open(F("golomb"), 3, 10)
        assert not coset_open(F("golomb"), 2, 10)
        assert coset_open(F("rizza"), 0, 5)
        assert not coset_open(F("rizza"), 1, 5)

    @pytest.mark.parametrize("fam", ALL, ids=lambda f: f"{f.kind}{f.m or ''}")
    def test_closed_form_against_levels(self, fam):
        # a closed-form "open" must be witnessed at level lcm(b, a-dependent) ;
        # a closed-form "closed" must fail at every level tried
        for b in range(1, 13):
            for a in range(-3, 13):
                rule = coset_open(fam, a, b)
                witnessed = any(
                    coset_open_at_level(fam, a, b, b * k) for k in _witness_multipliers(fam, a, b)
                )
                if fam.kind == "zero_divisor" and rule and not witnessed:
                    # openness needs infinitely many levels; check it via the maximal member
                    assert is_open(topology_at(fam, b), APSet(a, b).residues(b))
                    continue
                assert rule == witnessed, (a, b)

    def test_rizza_divisibility_closure(self):
        T = topology_at(F("rizza"), 12)
        for a in range(1, 12):
            for b in range(12):
                assert (a in closure(T, ResidueSet.of(12, [b]))) == (b % arith.gcd(a, 12) == 0 if a else b == 0) or a == 0


def _witness_multipliers(fam, a, b):
    ks = {1, 2, 3, 4, 6}
    if a:
        ks.add(abs(a))
    return sorted(ks)


class TestCores:
    @pytest.mark.parametrize("kind,formula", [
        ("golomb", nilpotents), ("kirch", nilpotents), ("szczuka", units), ("rizza", units),
    ])
    def test_brown_cores(self, kind, formula):
        for n in range(1, 200):
            core = indiscrete_core(topology_at(F(kind), n))
            assert set(core) == formula(n), n

    def test_kp_zero_in_every_point_closure(self):
        for n in range(1, 120):
            T = topology_at(F("kp"), n)
            for x in range(n):
                assert 0 in closure(T, ResidueSet.of(n, [x]))

    def test_zero_divisor_strictly_finer_than_szczuka(self):
        for n in range(2, 400):
            if len(arith.support(n)) < 2:
                continue
            zd, sz = topology_at(F("zero_divisor"), n), topology_at(F("szczuka"), n)
            assert zd.is_finer(sz) and zd != sz
            raw = raw_topology_at(F("zero_divisor"), n)
            assert raw.is_finer(sz) and raw != sz


class TestClosureAndDensity:
    def test_examples(self):
        assert closure_mod(F("golomb"), APSet(2, 4), 8).members() == [0, 2, 4, 6]
        assert closure_mod(F("furstenberg"), {5}, 12).members() == [5]
        assert closure_mod(F("rizza"), {6}, 12).members() == [1, 2, 3, 5, 6, 7, 9, 10, 11]
        for m in range(1, 40):
            assert dense_mod(F("golomb"), APSet(1, 1, naturals=True), m)
        assert dense_mod(F("golomb"), [k for k in range(12) if arith.gcd(k, 12) == 1], 12)
        assert not dense_mod(F("furstenberg"), {0}, 2)

    @given(st.sampled_from(ALL), st.integers(1, 24), st.lists(st.integers(-50, 50), max_size=6))
    def test_contains_image_and_idempotent(self, fam, m, S):
        c = closure_mod(fam, S, m)
        assert {x % m for x in S} <= set(c)
        assert closure_mod(fam, c, m) == c

    @given(st.integers(-20, 20), st.integers(1, 12), st.integers(1, 24))
    def test_progression_residues(self, a, b, m):
        direct = {(a + b * k) % m for k in range(m)}
        assert set(APSet(a, b).residues(m)) == direct
        assert set(APSet(a, b, naturals=True).residues(m)) == direct


class TestBrown:
    def test_examples(self):
        r = brown_conditions(F("golomb"), 2, 3)
        assert (r.B1, r.B2, r.B_n.members(), r.B_nk.members()) == (True, True, [0], [0])
        r = brown_conditions(F("szczuka"), 2, 3)
        assert (r.B1, r.B2, r.B_n.members(), r.B_nk.members()) == (True, True, [1], [1, 5])
        assert brown_conditions(six_point_family(), 3, 2).B1 is False

    @pytest.mark.parametrize("kind", ["golomb", "kirch", "szczuka", "rizza"])
    def test_named_families_are_brown(self, kind):
        for n in range(1, 25):
            for k in range(1, 6):
                r = brown_conditions(F(kind), n, k)
                assert r.B1 and r.B2, (n, k)

    def test_against_open_families(self):
        fam = F("kirch")
        for n, k in [(2, 3), (4, 3), (6, 2)]:
            Tn, Tnk = topology_at(fam, n), topology_at(fam, n * k)
            on, onk = opens_of(Tn), opens_of(Tnk)
            assert quotient_opens(onk, n * k, n) == on


class TestMaximality:
    def test_examples(self):
        w = nonmaximality_witness(F("golomb"), 12, 36)
        assert w is not None and w.members() == [2, 5, 8, 11]
        for n in (2, 6, 12):
            assert nonmaximality_witness(F("furstenberg"), n, 4 * n) is None
        assert nonmaximality_witness(six_point_family(), 6, 36) is None
        with pytest.raises(PreconditionError):
            nonmaximality_witness(F("golomb"), 12, 6)

    def test_witness_is_open_upstairs(self):
        fam = F("golomb")
        w = nonmaximality_witness(fam, 12, 36)
        T3 = raw_topology_at(fam, 3)
        assert is_open(T3, w.project(3))
        assert ResidueSet(12, lift_mask(w.project(3).bits, 3, 12)) == w
        assert not is_open(raw_topology_at(fam, 12), w)


class TestCounterexamples:
    def test_broughan_congruence(self):
        for k in range(7):
            assert broughan_congruence(k) == 4
            e = 5**k
            if k <= 3:
                assert (2 + 2**e) * (3 + 3**e) % 5 == 4

    def test_zd_examples(self):
        w = zd_separation_witness(2, 3)
        assert (w.level, w.U) == (720, APSet(2, 720))
        w = zd_separation_witness(0, 4)
        assert (w.level, w.U) == (120, APSet(0, 120))
        with pytest.raises(PreconditionError):
            zd_separation_witness(2, 2)
        with pytest.raises(PreconditionError):
            zd_separation_witness(1, 4)

    def test_zd_bound(self):
        from pcl.errors import BoundExceeded

        with pytest.raises(BoundExceeded):
            zd_separation_witness(9, -8)
        assert zd_separation_witness(9, -8, minimal=True).n <= 9

    @given(st.integers(-30, 30), st.integers(-30, 30))
    def test_zd_minimal_separates(self, a, b):
        if a == b or {a, b} & {1, -1}:
            return
        w = zd_separation_witness(a, b, minimal=True, check_bound=200)
        assert w.in_U(a) and w.in_V(b) and not w.in_V(a) and not w.in_U(b)

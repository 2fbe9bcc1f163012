import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest

from symrank.primes import (
    ExtendedInt,
    GapPolicy,
    PairFamily,
    PairSelectionError,
    policy_floor,
    select_pair,
    sieve,
    verify_gaps,
)


class TestSieve:
    def test_small(self):
        assert sieve(10).primes == (2, 3, 5, 7)

    def test_counts(self):
        assert len(sieve(100).primes) == 25
        assert len(sieve(10**6).primes) == 78498

    def test_limits(self):
        with pytest.raises(ValueError):
            sieve(1)
        with pytest.raises(ValueError):
            sieve(10**9 + 1)

    def test_lookups(self):
        t = sieve(100)
        assert t.prev_prime(97) == 97
        assert t.prev_prime(96) == 89
        assert t.next_prime(89) == 97
        assert t.count_between(89, 97) == 0
        assert t.count_between(7, 23) == 4  # 11, 13, 17, 19 (endpoints excluded)
        assert 89 in t and 91 not in t


class TestVerifyGaps:
    def test_two_thirds_to_1e5(self):
        assert verify_gaps(10**5, Fraction(2, 3)).violations == (7,)

    def test_small_limit_empty(self):
        assert verify_gaps(5, Fraction(2, 3)).violations == ()

    def test_bhp_exponent_to_200(self):
        # frozen from an independent sieve oracle: exact integer comparison
        # gap**40 <= l**21 flags 3 and 13 as well (2**120 > 3**63 etc.)
        scan = verify_gaps(200, Fraction(21, 40))
        assert scan.violations == (3, 7, 13, 23, 113)

    def test_max_gap_and_json(self):
        scan = verify_gaps(100, Fraction(2, 3))
        assert scan.max_gap_seen == 8  # gap 89 -> 97
        doc = scan.to_json_dict(include_timing=False)
        assert doc == {
            "limit": 100,
            "alpha": "2/3",
            "violations": [7],
            "max_gap_seen": 8,
        }
        assert "runtime_ms" in scan.to_json_dict(include_timing=True)

    @pytest.mark.parametrize("alpha", [Fraction(2, 3), Fraction(21, 40)])
    def test_monotone_in_limit(self, alpha):
        v1 = set(verify_gaps(10**3, alpha).violations)
        v2 = set(verify_gaps(10**4, alpha).violations)
        v3 = set(verify_gaps(10**5, alpha).violations)
        assert v1 <= v2 <= v3

    def test_alpha_domain(self):
        with pytest.raises(ValueError):
            verify_gaps(100, Fraction(3, 2))
        with pytest.raises(ValueError):
            verify_gaps(2, Fraction(2, 3))

    def test_exact_comparison_matches_high_precision(self):
        """The integer decision gap**d <= l**c agrees with 50-digit logs."""
        getcontext().prec = 50
        table = sieve(10**6)
        rng = random.Random(4242)
        idx = rng.sample(range(len(table.primes) - 1), 10**4)
        for alpha in (Fraction(2, 3), Fraction(21, 40)):
            c, d = alpha.numerator, alpha.denominator
            for i in idx[:5000]:
                l = table.primes[i]
                gap = table.primes[i + 1] - l
                exact = gap**d > l**c
                approx = Decimal(gap).ln() * d > Decimal(l).ln() * c
                assert exact == approx, (l, gap, alpha)


class TestSelectPair:
    def test_basic_example(self):
        pair = select_pair(5, 100, PairFamily.QUADRATIC_GENERIC)
        assert (pair.l_k, pair.l_k1) == (97, 101)
        assert pair.threshold == Fraction(97)
        assert pair.gap == 4 and pair.skipped == ()

    def test_eleven_example(self):
        pair = select_pair(11, 810, PairFamily.QUADRATIC_ELEVEN)
        assert pair.threshold == Fraction(100)
        assert (pair.l_k, pair.l_k1) == (97, 101)

    def test_skip_example(self):
        pair = select_pair(5, 8, PairFamily.QUADRATIC_GENERIC)
        assert pair.threshold == Fraction(5)
        assert (pair.l_k, pair.l_k1) == (3, 7)
        assert pair.skipped == (5,)

    def test_threshold_boundary_is_non_strict(self):
        # T lands exactly on a prime: that prime is taken as l_k
        pair = select_pair(13, 22, PairFamily.QUADRATIC_GENERIC)
        assert pair.threshold == Fraction(3)
        assert (pair.l_k, pair.l_k1) == (3, 5)

    def test_n_too_small(self):
        with pytest.raises(PairSelectionError):
            select_pair(5, 3, PairFamily.QUADRATIC_GENERIC)

    def test_family_p_consistency(self):
        with pytest.raises(ValueError):
            select_pair(11, 100, PairFamily.QUADRATIC_GENERIC)
        with pytest.raises(ValueError):
            select_pair(5, 100, PairFamily.QUADRATIC_ELEVEN)
        with pytest.raises(ValueError):
            select_pair(4, 100, PairFamily.QUADRATIC_GENERIC)

    def test_generic_inequalities_full_sweep(self):
        """Both proof-side inequalities hold exactly whenever no skip occurred."""
        table = sieve(50000)
        for p in (5, 7, 13, 17, 19):
            for n in range(p, 5001):
                for fam in (PairFamily.QUADRATIC_GENERIC, PairFamily.PRIME_GENERIC):
                    try:
                        pair = select_pair(p, n, fam, table)
                    except PairSelectionError:
                        continue
                    if pair.skipped:
                        continue
                    lk, lk1 = pair.l_k, pair.l_k1
                    assert (p - 1) * (lk1 + 1) > 2 * n + 2 * lk1 - 2
                    assert (p - 1) * (lk + 1) <= 2 * n + 2 * lk - 2
                    assert table.count_between(lk, lk1) == 0

    def test_eleven_inequalities_full_sweep(self):
        table = sieve(50000)
        p = 11
        for n in range(p, 5001):
            for fam in (PairFamily.QUADRATIC_ELEVEN, PairFamily.PRIME_ELEVEN):
                try:
                    pair = select_pair(p, n, fam, table)
                except PairSelectionError:
                    continue
                if pair.skipped:
                    continue
                lk, lk1 = pair.l_k, pair.l_k1
                assert (p - 1) * (lk1 + 1) > n + 2 * lk1
                assert (p - 1) * (lk + 1) <= n + 2 * lk
                assert table.count_between(lk, lk1) == 0

    def test_pair_brackets_threshold_even_with_skips(self):
        table = sieve(50000)
        for p in (5, 7, 13):
            for n in range(p, 2001, 7):
                try:
                    pair = select_pair(p, n, PairFamily.QUADRATIC_GENERIC, table)
                except PairSelectionError:
                    continue
                assert pair.l_k <= pair.threshold < pair.l_k1


class TestPolicies:
    def test_dudek_floor_is_symbolic(self):
        floor = policy_floor(GapPolicy.dudek(), PairFamily.QUADRATIC_GENERIC, 5)
        assert floor.kind == "symbolic"
        assert floor.render() == "exp(exp(33.3))+3"
        assert not floor.satisfied_by(10**18)

    def test_dudek_floor_eleven(self):
        floor = policy_floor(GapPolicy.dudek(), PairFamily.QUADRATIC_ELEVEN, 11)
        assert floor.render() == "8*exp(exp(33.3))+10"

    def test_bhp_floor_is_unknown(self):
        floor = policy_floor(GapPolicy.bhp(), PairFamily.PRIME_GENERIC, 7)
        assert floor.kind == "unknown"
        assert floor.render() == "unknown"
        assert not floor.satisfied_by(10**18)

    def test_empirical_floor(self):
        policy = GapPolicy.empirical(Fraction(2, 3), 11, 10**6)
        floor = policy_floor(policy, PairFamily.QUADRATIC_GENERIC, 5)
        assert floor.kind == "finite" and floor.value == 14
        assert floor.satisfied_by(14) and not floor.satisfied_by(13)

    def test_empirical_from_sieve(self):
        policy = GapPolicy.empirical_from_sieve(Fraction(2, 3), 10**5)
        assert policy.x_alpha.value == 11
        assert policy.verified_limit == 10**5

    def test_policy_invariants(self):
        with pytest.raises(ValueError):
            GapPolicy("bhp", Fraction(2, 3), ExtendedInt.unknown())
        with pytest.raises(ValueError):
            GapPolicy("dudek", Fraction(2, 3), ExtendedInt.finite(5))
        with pytest.raises(ValueError):
            GapPolicy("empirical", Fraction(2, 3), ExtendedInt.finite(11))  # no limit
        with pytest.raises(ValueError):
            GapPolicy("chebyshev", Fraction(1, 2), ExtendedInt.unknown())

    def test_policy_json(self):
        assert GapPolicy.dudek().to_json_dict() == {
            "name": "dudek",
            "alpha": "2/3",
            "x_alpha": "exp(exp(33.3))",
        }
        assert GapPolicy.bhp().to_json_dict()["alpha"] == "21/40"

    def test_extended_int_arithmetic(self):
        x = ExtendedInt.symbolic()
        scaled = x.scale_add(Fraction(3, 2), 4)
        assert scaled.render() == "3/2*exp(exp(33.3))+4"
        assert ExtendedInt.unknown().scale_add(2, 1).kind == "unknown"
        assert ExtendedInt.finite(10).scale_add(2, 1).value == 21

import random

import pytest

from symrank.fields import (
    ExtensionField,
    Matrix,
    PrimeField,
    SingularMatrixError,
    all_monic_polys,
    count_places_rational_ff,
    field_arith,
    find_irreducible,
    invert,
    is_irreducible,
    make_field,
    poly_divmod,
    select_independent_rows,
    solve_linear,
)
from symrank.ntheory import prime_power_split


def brute_irreducible(f, poly):
    """Trial division by every monic polynomial of degree <= n/2."""
    n = len(poly) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for div in all_monic_polys(f, d):
            if not poly_divmod(f, poly, div)[1]:
                return False
    return True


class TestFindIrreducible:
    def test_degree_one(self):
        f2 = make_field(2)
        assert find_irreducible(f2, 1) == (0, 1)

    def test_smallest_over_f2(self):
        f2 = make_field(2)
        assert find_irreducible(f2, 2) == (1, 1, 1)

    def test_smallest_over_f5(self):
        f5 = make_field(5)
        assert find_irreducible(f5, 2) == (2, 0, 1)

    @pytest.mark.parametrize(
        "q,n",
        [(2, 2), (2, 4), (2, 8), (2, 16), (3, 3), (3, 10), (4, 2), (5, 3), (7, 2), (9, 2)],
    )
    def test_minimal_and_irreducible(self, q, n):
        f = make_field(q)
        got = find_irreducible(f, n)
        assert len(got) == n + 1 and got[-1] == f.one
        assert is_irreducible(f, got)
        # nothing earlier in canonical order is irreducible
        for cand in all_monic_polys(f, n):
            if cand == got:
                break
            assert not brute_irreducible(f, cand)

    @pytest.mark.parametrize("q,n", [(2, 6), (2, 16), (3, 4), (5, 4), (4, 3)])
    def test_agrees_with_brute_force(self, q, n):
        # exhaustive factor check up to the q**n = 2**16 verification boundary
        f = make_field(q)
        assert brute_irreducible(f, find_irreducible(f, n))


class TestFieldArithmetic:
    def test_f4_modulus_relation(self):
        f4 = make_field(4)
        t = f4.element(2)
        assert (t * t).to_int() == 3  # t^2 = t + 1

    def test_f5_product(self):
        f5 = make_field(5)
        assert (f5.element(3) * f5.element(4)).to_int() == 2

    def test_f4_square_of_one_plus_t(self):
        f4 = make_field(4)
        x = f4.element(3)
        assert (x * x).to_int() == 2

    def test_division_by_zero_is_distinct(self):
        f5 = make_field(5)
        with pytest.raises(ZeroDivisionError):
            f5.element(3) / f5.element(0)
        f4 = make_field(4)
        with pytest.raises(ZeroDivisionError):
            f4.inv(f4.zero)

    def test_field_arith_dispatch(self):
        f4 = make_field(4)
        a, b = f4.element(2), f4.element(3)
        assert field_arith(a, b, "add").to_int() == 1
        assert field_arith(a, b, "sub").to_int() == 1
        assert field_arith(a, b, "mul").to_int() == 1  # t*(1+t) = t+t^2 = 1
        assert field_arith(a, b, "div") * b == a
        assert field_arith(b, b, "inv") * b == f4.element(1)
        with pytest.raises(ValueError):
            field_arith(a, b, "pow")

    def test_mismatched_fields_rejected(self):
        with pytest.raises(ValueError):
            make_field(4).element(1) + make_field(5).element(1)

    @pytest.mark.parametrize("q", [2, 3, 5, 4, 8, 9, 25, 27])
    def test_axioms_on_random_triples(self, q):
        f = make_field(q)
        rng = random.Random(q * 1000 + 7)
        for _ in range(60):
            a, b, c = (f.random(rng) for _ in range(3))
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            assert f.add(a, f.neg(a)) == f.zero
            if a != f.zero:
                assert f.mul(a, f.inv(a)) == f.one

    def test_tower_over_extension_base(self):
        # GF(4^2) built directly over GF(4), one-step
        f4 = make_field(4)
        f16 = ExtensionField(f4, 2)
        rng = random.Random(99)
        for _ in range(40):
            a, b = f16.random(rng), f16.random(rng)
            assert f16.mul(a, b) == f16.mul(b, a)
            if a != f16.zero:
                assert f16.mul(a, f16.inv(a)) == f16.one
        assert f16.order == 16 and f16.char == 2

    def test_code_round_trip_and_order(self):
        for q in (2, 4, 9, 25):
            f = make_field(q)
            seen = [f.to_int(v) for v in f.elements()]
            assert seen == list(range(q))
            for k in range(q):
                assert f.to_int(f.from_int(k)) == k

    def test_prime_field_validation(self):
        with pytest.raises(ValueError):
            PrimeField(6)
        with pytest.raises(ValueError):
            PrimeField(1)
        with pytest.raises(ValueError):
            make_field(12)  # not a prime power

    def test_reducible_modulus_rejected(self):
        f2 = make_field(2)
        with pytest.raises(ValueError):
            ExtensionField(f2, 2, (1, 0, 1))  # u^2+1 = (u+1)^2
        with pytest.raises(ValueError):
            ExtensionField(f2, 2, (1, 1))  # wrong degree


class TestLinearAlgebra:
    def test_identity_solve(self):
        f5 = make_field(5)
        rhs = Matrix(f5, 3, 1, [1, 2, 3])
        assert solve_linear(Matrix.identity(f5, 3), rhs).entries == [1, 2, 3]

    def test_back_substitution_over_f2(self):
        f2 = make_field(2)
        m = Matrix.from_rows(f2, [[1, 1], [0, 1]])
        sol = solve_linear(m, Matrix(f2, 2, 1, [1, 1]))
        assert sol.entries == [0, 1]

    def test_vandermonde_inverse_over_f5(self):
        f5 = make_field(5)
        nodes = [0, 1, 2]
        m = Matrix.from_rows(f5, [[pow(a, j, 5) for j in range(3)] for a in nodes])
        inv = invert(m)
        assert (m @ inv).entries == Matrix.identity(f5, 3).entries
        assert (inv @ m).entries == Matrix.identity(f5, 3).entries

    @pytest.mark.parametrize("q", [2, 5, 9])
    def test_solve_round_trip_random(self, q):
        f = make_field(q)
        rng = random.Random(q + 31)
        done = 0
        while done < 20:
            n = rng.randrange(1, 6)
            m = Matrix(f, n, n, [f.random(rng) for _ in range(n * n)])
            v = [f.random(rng) for _ in range(n)]
            try:
                sol = solve_linear(m, Matrix(f, n, 1, m.matvec(v)))
            except SingularMatrixError:
                continue
            assert sol.entries == v
            done += 1

    def test_singular_reports_pivot_column(self):
        f2 = make_field(2)
        m = Matrix.from_rows(f2, [[1, 1], [1, 1]])
        with pytest.raises(SingularMatrixError) as exc:
            invert(m)
        assert exc.value.pivot_col == 1

    def test_select_independent_rows(self):
        f5 = make_field(5)
        m = Matrix.from_rows(f5, [[1, 2], [2, 4], [0, 1], [3, 3]])
        assert select_independent_rows(m, 2) == [0, 2]
        with pytest.raises(SingularMatrixError):
            select_independent_rows(Matrix.from_rows(f5, [[1, 2], [2, 4]]), 2)


class TestPlaceCounts:
    def test_examples(self):
        assert count_places_rational_ff(2, 1) == 3
        assert count_places_rational_ff(2, 2) == 1
        assert count_places_rational_ff(5, 2) == 10

    @pytest.mark.parametrize("q,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (4, 2)])
    def test_against_enumeration(self, q, d):
        f = make_field(q)
        brute = sum(1 for poly in all_monic_polys(f, d) if brute_irreducible(f, poly))
        assert count_places_rational_ff(q, d) == brute

    def test_descent_identity_all_prime_powers_to_64(self):
        for q in range(2, 65):
            try:
                prime_power_split(q)
            except ValueError:
                continue
            assert count_places_rational_ff(q * q, 1) == count_places_rational_ff(
                q, 1
            ) + 2 * count_places_rational_ff(q, 2)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            count_places_rational_ff(6, 1)
        with pytest.raises(ValueError):
            count_places_rational_ff(5, 0)

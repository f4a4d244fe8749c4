from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nilrad.errors import ExprSyntaxError, NotInvertible
from nilrad.fermat import (FermatReal, Order, Trichotomy, abs_value, add, ideal_membership, invert,
                           is_close, leq, lt, mul, nilpotency_index, parse_fermat, standard_part,
                           strict_order, try_ratio, weak_order)
from nilrad.oracle import representative

from .strategies import (dyadics, exact_fermat_reals, fermat_reals, infinitesimals,
                         nonzero_dyadics)

t = FermatReal.monomial


def fr(std, *terms):
    return FermatReal.from_terms(std, [(Fraction(q), c) for q, c in terms])


class TestCanonicalForm:
    def test_rejects_zero_coefficient(self):
        with pytest.raises(ValueError):
            FermatReal(0, ((Fraction(1), 0.0),))

    def test_rejects_unsorted_or_out_of_range(self):
        with pytest.raises(ValueError):
            FermatReal(0, ((Fraction(1), 1.0), (Fraction(1, 2), 1.0)))
        with pytest.raises(ValueError):
            FermatReal.monomial(Fraction(3, 2))

    def test_from_terms_merges_and_drops(self):
        x = FermatReal.from_terms(1, [(Fraction(1, 2), 2.0), (Fraction(1), 1.0), (Fraction(1, 2), -2.0)])
        assert x == FermatReal(1, ((Fraction(1), 1.0),))


class TestAdd:
    def test_additive_inverse(self):
        assert add(t(Fraction(1, 2)), t(Fraction(1, 2), -1.0)) == FermatReal(0)

    def test_merge(self):
        got = fr(3, (1, 1.0)) + fr(2, ("1/2", 4.0))
        assert got == fr(5, ("1/2", 4.0), (1, 1.0))
        # sampled representatives agree to o(t)
        for s in (1e-3, 1e-6):
            assert got(s) == pytest.approx(3 + s + 2 + 4 * s ** 0.5, rel=1e-15)

    @given(fermat_reals())
    def test_identity(self, x):
        assert x + 0 == x
        assert x + FermatReal(0) == x


class TestMul:
    def test_first_order_square_vanishes(self):
        h = t(1)
        assert mul(h, h) == FermatReal(0)

    def test_power_rules(self):
        h, u = FermatReal.witness(3), FermatReal.witness(5)
        assert (h * h * u * u * u).is_zero()
        hhu = h * h * u
        assert hhu.terms == ((Fraction(13, 15), 1.0),)
        assert ideal_membership(hhu, 2)

    def test_square_zero_elements_multiply_to_zero(self):
        h, k = t(1, 2.0), t(1, -3.0)
        assert (h * h).is_zero() and (k * k).is_zero()
        assert (h * k).is_zero()

    def test_first_order_times_infinitesimal(self):
        assert (t(1) * t(Fraction(1, 6))).is_zero()

    @given(fermat_reals(), fermat_reals())
    def test_commutative(self, x, y):
        assert x * y == y * x


class TestStandardPart:
    def test_read_off(self):
        assert standard_part(fr(5, ("1/2", 2.0))) == 5

    @given(infinitesimals())
    def test_infinitesimal(self, x):
        assert standard_part(x) == 0

    @given(fermat_reals(), fermat_reals())
    def test_homomorphism(self, x, y):
        assert standard_part(x * y) == standard_part(x) * standard_part(y)
        assert standard_part(x + y) == standard_part(x) + standard_part(y)


class TestIdeals:
    def test_membership(self):
        s = t(Fraction(1, 2))
        assert ideal_membership(s, 2)
        assert not ideal_membership(s, 1)
        assert ideal_membership(t(Fraction(13, 15)), 2)
        assert not ideal_membership(FermatReal(1), 5)

    @pytest.mark.parametrize("k", range(1, 8))
    def test_zero_everywhere(self, k):
        assert ideal_membership(FermatReal(0), k)

    @pytest.mark.parametrize("k", range(1, 8))
    def test_witness_is_sharp(self, k):
        w = FermatReal.witness(k)
        assert ideal_membership(w, k)
        assert k == 1 or not ideal_membership(w, k - 1)
        # w^k is in D and nonzero, w^(k+1) vanishes
        assert ideal_membership(w ** k, 1) and not (w ** k).is_zero()
        assert (w ** (k + 1)).is_zero()

    @given(fermat_reals(), infinitesimals())
    def test_d_is_an_ideal(self, x, n):
        h = FermatReal.from_terms(0, [(q, c) for q, c in n.terms if q == 1])
        assert ideal_membership(x * h, 1)
        assert (h * h).is_zero()


class TestNilpotencyIndex:
    def test_examples(self):
        assert nilpotency_index(t(1)) == 2
        assert nilpotency_index(t(Fraction(1, 3))) == 4
        assert nilpotency_index(fr(1, (1, 1.0))) is None
        assert nilpotency_index(FermatReal(0)) == 1

    @given(infinitesimals())
    def test_least_vanishing_power(self, x):
        n = nilpotency_index(x)
        q = x.min_exponent()
        assert n * q > 1 >= (n - 1) * q
        power = FermatReal(1)
        for i in range(1, n + 1):
            power = power * x
            assert power.is_zero() == (i == n)


class TestInvert:
    def test_first_order(self):
        d = t(1, 3.0)
        assert invert(1 + d) == 1 - d

    def test_real(self):
        assert invert(FermatReal(2)) == FermatReal(0.5)

    def test_geometric_series(self):
        x = fr(1, ("1/2", 1.0))
        inv = invert(x)
        assert inv == fr(1, ("1/2", -1.0), (1, 1.0))
        assert x * inv == FermatReal(1)

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            invert(t(Fraction(1, 2)))
        with pytest.raises(NotInvertible):
            FermatReal(1) / FermatReal(0)

    @given(exact_fermat_reals())
    def test_exact_inverse(self, x):
        if x.std == 0:
            with pytest.raises(NotInvertible):
                invert(x)
        else:
            assert x * invert(x) == FermatReal(1)

    @given(st.integers(-4, 4), st.sampled_from([1.0, -1.0]), infinitesimals())
    def test_dyadic_inverse_exact(self, e, sign, n):
        x = sign * 2.0 ** e + n
        assert x * invert(x) == FermatReal(1)


class TestRatio:
    def test_scalar_multiple(self):
        assert try_ratio(t(1, 3.0), t(1)) == 3

    def test_no_ratio(self):
        assert try_ratio(t(Fraction(1, 2)), t(1)) is None
        assert try_ratio(FermatReal(0), FermatReal(0)) is None
        assert try_ratio(fr(0, ("1/2", 1.0), (1, 1.0)), fr(0, ("1/2", 1.0), (1, 2.0))) is None

    def test_zero_numerator(self):
        assert try_ratio(FermatReal(0), t(1)) == 0

    @given(fermat_reals(), nonzero_dyadics)
    def test_recovers_scalar(self, k, r):
        assume(not k.is_zero())
        assert try_ratio(k * r, k) == r

    @given(fermat_reals(), dyadics, dyadics)
    def test_cancellation_law(self, x, r, s):
        assume(not x.is_zero() and r != s)
        assert x * r != x * s


class TestOrder:
    def test_positive_infinitesimal(self):
        assert weak_order(FermatReal(0), t(1)) is Order.WEAKLY_LESS
        assert weak_order(t(1), FermatReal(0)) is Order.WEAKLY_GREATER

    def test_leading_exponent_dominates(self):
        x, y = t(1), t(Fraction(1, 2))
        assert weak_order(x, y) is Order.WEAKLY_LESS
        assert x(1e-6) < y(1e-6)

    @given(fermat_reals())
    def test_reflexive(self, x):
        assert weak_order(x, x) is Order.EQUAL

    def test_trichotomy_examples(self):
        h = t(1)
        assert not lt(FermatReal(0), h)
        assert strict_order(FermatReal(0), h) is Trichotomy.CLOSE
        assert strict_order(FermatReal(1), FermatReal(2)) is Trichotomy.LESS
        assert strict_order(1 + h, 2 - h) is Trichotomy.LESS
        assert strict_order(2 - h, 1 + h) is Trichotomy.GREATER

    @given(fermat_reals(), fermat_reals())
    def test_weak_trichotomy_exactly_one(self, x, y):
        close = x.std == y.std
        assert [close, lt(x, y), lt(y, x)].count(True) == 1

    @given(fermat_reals(), fermat_reals(), fermat_reals())
    def test_transitive_and_antisymmetric(self, x, y, z):
        le = lambda a, b: weak_order(a, b) in (Order.WEAKLY_LESS, Order.EQUAL)
        if le(x, y) and le(y, z):
            assert le(x, z)
        if le(x, y) and le(y, x):
            assert x == y

    @given(fermat_reals(), fermat_reals(), fermat_reals())
    def test_compatible_with_ring(self, x, y, z):
        le = lambda a, b: weak_order(a, b) in (Order.WEAKLY_LESS, Order.EQUAL)
        if le(x, y):
            assert le(x + z, y + z)
            if le(FermatReal(0), z):
                assert le(x * z, y * z)

    @given(fermat_reals(), dyadics, dyadics)
    def test_inequality_cancellation(self, x, r, s):
        assume(not x.is_zero() and r <= s)
        assert weak_order(abs_value(x) * r, abs_value(x) * s) is not Order.WEAKLY_GREATER

    def test_never_incomparable(self):
        assert Order.INCOMPARABLE.value == "incomparable-by-model"

    def test_leq(self):
        h = t(1)
        assert leq(h, h)
        assert not leq(FermatReal(0), h)  # weakly less, but h is not invertible
        assert leq(FermatReal(0), 1 + h)

    def test_close(self):
        assert is_close(FermatReal(1), 1 + t(1, 5.0))
        assert not is_close(FermatReal(1), 1 + t(Fraction(1, 2)))


class TestAbs:
    def test_examples(self):
        assert abs_value(-t(1)) == t(1)
        assert abs_value(FermatReal(0)) == FermatReal(0)
        assert abs_value(fr(-2, (1, 1.0))) == fr(2, (1, -1.0))

    @given(fermat_reals())
    def test_properties(self, x):
        a = abs_value(x)
        assert (a == FermatReal(0)) == (x == FermatReal(0))
        assert weak_order(FermatReal(0), a) in (Order.WEAKLY_LESS, Order.EQUAL)
        assert a == x or a == -x


class TestRepresentatives:
    @settings(max_examples=50)
    @given(fermat_reals(), fermat_reals())
    def test_product_differs_by_little_oh(self, x, y):
        # pointwise product of representatives minus the truncated product is o(t)
        ratios = []
        with mpmath.workdps(60):
            for s in ("1e-3", "1e-6", "1e-9"):
                diff = representative(x, s) * representative(y, s) - representative(x * y, s)
                ratios.append(abs(diff) / mpmath.mpf(s))
        assert ratios[0] >= ratios[1] >= ratios[2] or max(ratios) < 1e-40


class TestSerialization:
    def test_json_schema(self):
        x = fr(1, ("1/2", -1.0), (1, 0.25))
        assert x.to_json() == ('{"std": 1, "terms": [{"num": 1, "den": 2, "coef": -1}, '
                               '{"num": 1, "den": 1, "coef": 0.25}]}')

    @given(fermat_reals())
    def test_round_trip(self, x):
        import json
        assert FermatReal.from_dict(json.loads(x.to_json())) == x

    def test_render(self):
        assert str(fr(1, ("1/2", 0.5), (1, -0.125))) == "1 + 0.5·t^(1/2) − 0.125·t^1"
        assert str(FermatReal(0)) == "0"
        assert str(-t(1)) == "−1·t^1"

    @given(fermat_reals())
    def test_render_parses_back(self, x):
        assert parse_fermat(x.render(17)) == x

    def test_literal_syntax(self):
        assert parse_fermat("2 - 0.5*t^(1/2) + 3·|t|") == fr(2, ("1/2", -0.5), (1, 3.0))
        assert parse_fermat("t") == t(1)
        with pytest.raises(ExprSyntaxError):
            parse_fermat("t^(3/2)")
        with pytest.raises(ExprSyntaxError):
            parse_fermat("1 +")

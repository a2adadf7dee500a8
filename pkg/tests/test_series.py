import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strength_verify.series import (
    DegreeProfile,
    TruncSeries,
    binom,
    bracket,
    froberg_coeff,
    froberg_coeff_unbracketed,
    froberg_series,
)


def naive_product(n, degrees, order):
    """Oracle: expand prod(1 - t^d_i) by brute force, then convolve with C(n+k, n)."""
    numer = [0] * (order + 1)
    for signs in itertools.product((0, 1), repeat=len(degrees)):
        deg = sum(d for d, s in zip(degrees, signs) if s)
        if deg <= order:
            numer[deg] += (-1) ** sum(signs)
    return [sum(numer[j] * comb(n + k - j, n) for j in range(k + 1)) for k in range(order + 1)]


class TestBinom:
    def test_examples(self):
        assert binom(5, 1) == 5
        assert binom(3, 7) == 0
        assert binom(7, 3) == 35

    def test_negative_top_rejected(self):
        with pytest.raises(ValueError):
            binom(-1, 0)

    def test_big(self):
        assert binom(200, 100) == comb(200, 100)


class TestTruncSeries:
    def test_order_and_padding(self):
        s = TruncSeries([1, 2], order=4)
        assert s.order == 4
        assert s.coeffs == (1, 2, 0, 0, 0)
        assert s[7] == 0

    def test_multiply_truncates_at_smaller_order(self):
        a = TruncSeries([1, 1, 1, 1, 1])
        b = TruncSeries([1, -1, 0])
        prod = a * b
        assert prod.order == 2
        assert prod.coeffs == (1, 0, 0)

    def test_add_keeps_order(self):
        a = TruncSeries([1, 2, 3])
        assert (a + a).coeffs == (2, 4, 6)
        assert (a - a).coeffs == (0, 0, 0)

    def test_divide_by_one_minus_t_inverts(self):
        s = TruncSeries([3, -1, 4, 1, -5, 9])
        assert s.times_one_minus_t_power(1, 2).divide_by_one_minus_t(2) == s


class TestBracket:
    def test_cuts_at_first_negative(self):
        assert bracket(TruncSeries([1, 3, 1, -5, 2])).coeffs == (1, 3, 1, 0, 0)

    def test_nonnegative_unchanged(self):
        s = TruncSeries([1, 0, 4, 2])
        assert bracket(s) == s

    def test_negative_leading(self):
        assert bracket(TruncSeries([-1, 7])).coeffs == (0, 0)

    def test_bracket_example_from_series(self):
        # (1 - t^2)^5 / (1 - t)^3 up to t^3
        s = froberg_series(2, DegreeProfile([2] * 5), 3)
        assert s.coeffs == (1, 3, 1, -5)
        assert bracket(s).coeffs == (1, 3, 1, 0)

    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=15))
    def test_idempotent(self, coeffs):
        s = TruncSeries(coeffs)
        assert bracket(bracket(s)) == bracket(s)


class TestFroberg:
    def test_two_quadrics_in_three_variables(self):
        assert froberg_series(2, DegreeProfile([2, 2]), 4).coeffs == (1, 3, 4, 4, 4)

    def test_three_quadrics_five_variables(self):
        assert froberg_coeff(4, DegreeProfile([2, 2, 2]), 2) == comb(6, 2) - 3 == 12

    def test_mixed_profile(self):
        assert froberg_coeff(3, DegreeProfile([2, 2, 3]), 3) == comb(6, 3) - 2 * 4 - 1 == 11

    def test_three_quadrics_three_variables(self):
        assert froberg_coeff(2, DegreeProfile([2, 2, 2]), 3) == 1

    @pytest.mark.parametrize("d", range(1, 9))
    def test_binary_principal(self, d):
        # (1 - t^d)/(1 - t)^2 at t^d: (d + 1) binary forms minus the one multiple of f.
        assert froberg_coeff(1, DegreeProfile([d]), d) == d

    def test_empty_profile(self):
        assert froberg_coeff(0, DegreeProfile([]), 5) == 1

    @pytest.mark.parametrize("n", range(0, 21))
    def test_free_coefficients(self, n):
        s = froberg_series(n, DegreeProfile([]), 12)
        assert list(s.coeffs) == [comb(n + k, n) for k in range(13)]

    @settings(max_examples=60)
    @given(
        st.integers(0, 5),
        st.lists(st.integers(1, 6), max_size=6),
        st.integers(0, 14),
        st.randoms(use_true_random=False),
    )
    def test_matches_naive_expansion_and_is_symmetric(self, n, degrees, order, rnd):
        expected = naive_product(n, degrees, order)
        assert list(froberg_series(n, DegreeProfile(degrees), order).coeffs) == expected
        shuffled = list(degrees)
        rnd.shuffle(shuffled)
        assert froberg_series(n, DegreeProfile(shuffled), order) == froberg_series(n, DegreeProfile(degrees), order)

    @pytest.mark.parametrize("n", range(0, 6))
    def test_complete_intersections_need_no_bracket(self, n):
        for s in range(1, n + 2):
            for degrees in itertools.combinations_with_replacement(range(1, 6), s):
                top = sum(degrees) - s
                series = froberg_series(n, DegreeProfile(degrees), top)
                assert bracket(series) == series
                assert froberg_coeff(n, degrees, top) == froberg_coeff_unbracketed(n, degrees, top)


class TestDegreeProfile:
    def test_multiplicities_round_trip(self):
        p = DegreeProfile([3, 1, 3, 2])
        assert p.degrees == (1, 2, 3, 3)
        assert p.multiplicities == {1: 1, 2: 1, 3: 2}
        assert DegreeProfile.from_multiplicities(p.multiplicities) == p
        assert len(p) == 4

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            DegreeProfile([0, 2])

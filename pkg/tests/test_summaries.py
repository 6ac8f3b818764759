import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from apgoldbach.partitions import exceptional_sets_for_modulus
from apgoldbach.summaries import (
    count_empty_pairs,
    format_average,
    format_percent,
    growth_series,
    summarize_modulus,
    totient,
)


@pytest.fixture(scope="module")
def sets_by_m(table_1e6):
    return {
        m: exceptional_sets_for_modulus(m, 10**6, table=table_1e6)
        for m in (2, 4, 8, 10)
    }


def test_m4_row(sets_by_m):
    s = summarize_modulus(sets_by_m[4], 4)
    r, u = s.restricted, s.unrestricted
    assert (r.l_min, r.l_avg, r.l_max, r.e_max, r.e_count, r.e_count_mult) == (
        1, Fraction(1), 1, 4, 1, 2)
    assert (u.l_min, u.l_avg, u.l_max, u.e_max, u.e_count, u.e_count_mult) == (
        1, Fraction(2), 5, 62, 6, 8)


def test_m10_row(sets_by_m):
    u = summarize_modulus(sets_by_m[10], 10).unrestricted
    assert (u.l_min, u.l_max, u.e_max, u.e_count, u.e_count_mult) == (0, 4, 152, 13, 25)
    assert format_average(u.l_avg) == "1.563"


def test_m2_families_coincide(sets_by_m):
    s = summarize_modulus(sets_by_m[2], 2)
    assert s.restricted == s.unrestricted
    assert s.csv_row() == "2,2,2.0,2,4,2,2,2,2.0,2,4,2,2"


def test_average_times_pairs_identity(sets_by_m):
    for m, sets in sets_by_m.items():
        s = summarize_modulus(sets, m)
        phi = totient(m)
        assert s.unrestricted.l_avg * phi**2 == s.unrestricted.e_count_mult
        assert s.restricted.l_avg * phi == s.restricted.e_count_mult


def test_restricted_dominated(sets_by_m):
    for m, sets in sets_by_m.items():
        s = summarize_modulus(sets, m)
        assert s.restricted.e_max <= s.unrestricted.e_max
        assert s.restricted.e_count <= s.unrestricted.e_count
        assert s.restricted.e_count_mult <= s.unrestricted.e_count_mult


def test_incomplete_coverage_rejected(sets_by_m):
    partial = dict(sets_by_m[8])
    del partial[(3, 5)]
    with pytest.raises(ValueError, match=r"missing ordered pairs.*\(3, 5\)"):
        summarize_modulus(partial, 8)


def test_relabel_invariance(sets_by_m):
    flipped = {(b, a): es for (a, b), es in sets_by_m[8].items()}
    assert summarize_modulus(flipped, 8) == summarize_modulus(sets_by_m[8], 8)


def test_empty_pairs_m8(sets_by_m):
    c = count_empty_pairs(sets_by_m[8], 8)
    assert c.z_m == 3
    empty_keys = {k for k, v in sets_by_m[8].items() if not v.elements}
    assert empty_keys == {(3, 3), (3, 5), (5, 3)}
    assert c.csv_row() == "8,3,18.8"


def test_empty_pairs_m2(sets_by_m):
    assert count_empty_pairs(sets_by_m[2], 2).z_m == 0


def test_growth_series(sets_by_m):
    rows = growth_series([summarize_modulus(sets_by_m[m], m) for m in (4, 8, 10)])
    by_m = {r.m: r for r in rows}
    assert (by_m[4].e_max, by_m[4].phi) == (62, 2)
    assert "256" in by_m[4].csv_row().split(",")  # 16 m^2 at m=4
    assert (by_m[10].e_max, by_m[10].phi) == (152, 4)


class TestFormatting:
    @pytest.mark.parametrize(
        "frac,expected",
        [
            (Fraction(2), "2.0"),
            (Fraction(5, 4), "1.25"),
            (Fraction(25, 16), "1.563"),  # half rounds away from zero
            (Fraction(2, 6), "0.333"),
            (Fraction(1157, 400), "2.893"),
            (Fraction(286, 100), "2.86"),
            (Fraction(0), "0.0"),
        ],
    )
    def test_average(self, frac, expected):
        assert format_average(frac) == expected

    @pytest.mark.parametrize(
        "frac,expected",
        [
            (Fraction(3, 16), "18.8"),
            (Fraction(20, 64), "31.3"),
            (Fraction(2, 100), "2.0"),
            (Fraction(0), "0.0"),
        ],
    )
    def test_percent(self, frac, expected):
        assert format_percent(frac) == expected

    @given(st.fractions(min_value=0, max_value=100))
    def test_average_parses_back(self, frac):
        s = format_average(frac)
        assert abs(float(s) - float(frac)) <= 0.0005 + 1e-9
        assert "." in s


def test_totient_small_values():
    expected = {1: 1, 2: 1, 8: 4, 10: 4, 46: 22, 60: 16}
    for m, phi in expected.items():
        assert totient(m) == phi
    for m in range(1, 50):
        assert totient(m) == sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import p_brute
from qhol.series import (
    SeriesError,
    TruncatedSeries,
    geometric,
    partition_count,
    partition_generating_series,
    series_combine,
    series_inverse,
    symmetric_power_series,
)

coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=12)


def series(cs):
    return TruncatedSeries.from_coeffs(cs, len(cs) - 1)


@pytest.mark.parametrize("k, m, expected", [(1, 7, 1), (2, 4, 3), (2, 5, 3), (3, 6, 7), (8, 0, 1), (4, -1, 0)])
def test_partition_count_small(k, m, expected):
    assert partition_count(k, m) == expected


@pytest.mark.parametrize("k", range(1, 9))
def test_partition_count_matches_enumeration(k):
    for m in range(31):
        assert partition_count(k, m) == p_brute(k, m)


def test_partition_count_rejects_k0():
    with pytest.raises(SeriesError):
        partition_count(0, 3)


def test_cap_propagates_as_min():
    a = TruncatedSeries.from_coeffs([1, 2, 3], 5)
    b = TruncatedSeries.from_coeffs([1, 1], 3)
    assert (a * b).cap == 3
    assert (a + b).cap == 3
    with pytest.raises(SeriesError, match="above the cap"):
        (a * b)[4]


def test_getitem_negative_degree_is_zero():
    assert TruncatedSeries.one(3)[-2] == 0


def test_unknown_op():
    with pytest.raises(SeriesError):
        series_combine(TruncatedSeries.one(2), TruncatedSeries.one(2), "div")


def test_inverse_needs_unit():
    with pytest.raises(SeriesError, match="not a unit"):
        series_inverse(TruncatedSeries.from_coeffs([2, 1], 3))


def test_geometric():
    assert geometric(2, 6).coeffs == (1, 0, 1, 0, 1, 0, 1)


@given(coeff_lists, coeff_lists)
def test_mul_commutes(a, b):
    assert series(a) * series(b) == series(b) * series(a)


@given(coeff_lists, coeff_lists, coeff_lists)
def test_mul_distributes(a, b, c):
    x, y, z = series(a), series(b), series(c)
    assert x * (y + z) == x * y + x * z


@given(coeff_lists, st.sampled_from([1, -1]))
def test_inverse_roundtrip(cs, unit):
    cs = [unit] + cs
    s = series(cs)
    assert s * series_inverse(s) == TruncatedSeries.one(s.cap)


@given(st.integers(1, 6), st.integers(0, 25))
def test_generating_series_agrees_with_count(k, cap):
    g = partition_generating_series(k, cap)
    assert [g[m] for m in range(cap + 1)] == [p_brute(k, m) for m in range(cap + 1)]


def test_symmetric_power_of_point_plus_degree2():
    # Sym^2 of span{1, x}: {1, x, x^2} in degrees 0, 2, 4
    f = TruncatedSeries.from_coeffs([1, 0, 1], 6)
    assert symmetric_power_series(f, 2).coeffs == (1, 0, 1, 0, 1, 0, 0)


def test_symmetric_power_first_is_identity():
    f = TruncatedSeries.from_coeffs([1, 0, 2, 0, 3], 4)
    assert symmetric_power_series(f, 1) == f


def test_symmetric_power_rejects_bad_input():
    with pytest.raises(SeriesError):
        symmetric_power_series(TruncatedSeries.one(2), 0)
    with pytest.raises(SeriesError):
        symmetric_power_series(TruncatedSeries.from_coeffs([1, -1], 2), 2)

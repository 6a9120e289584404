import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cp_homology, det, invariant_factors_by_minors, mod_p_dim, rp_homology, stunted_homology
from qhol.groups import FgAbelianGroup
from qhol.homology import (
    ChainComplex,
    HomologyError,
    homology_of_complex,
    matmul,
    product_complex,
    rank_mod_p,
    smash_homology,
    smith_normal_form,
    space_homology,
    standard_space_complex,
    thom_space_homology,
)

small_mats = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


def G(free=0, *tors):
    return FgAbelianGroup(free, tors)


def test_snf_known_example():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == ((2, 6, 12), 3)


def test_snf_zero_and_empty():
    assert smith_normal_form([[0, 0], [0, 0]]) == ((), 0)
    assert smith_normal_form([]) == ((), 0)


@given(small_mats)
def test_snf_matches_determinantal_divisors(m):
    diag, rank = smith_normal_form(m)
    assert diag == invariant_factors_by_minors(m)
    assert rank == len(diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))


@pytest.mark.parametrize("seed", range(4))
def test_snf_8x8_against_minors(seed):
    rng = random.Random(seed)
    if seed % 2:
        # rank-deficient product, so the determinantal chain stops early
        a = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(8)]
        b = [[rng.randint(-3, 3) for _ in range(8)] for _ in range(5)]
        m = matmul(a, b)
    else:
        m = [[rng.randint(-4, 4) for _ in range(8)] for _ in range(8)]
    assert smith_normal_form(m)[0] == invariant_factors_by_minors(m)


def _unimodular(rng, n, steps=12):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-2, 2)
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    return u


@pytest.mark.parametrize("seed", range(3))
def test_snf_recovers_scrambled_diagonal(seed):
    rng = random.Random(100 + seed)
    diag = [1, 2, 2, 6, 12, 36, 0, 0]
    d = [[diag[i] if i == j else 0 for j in range(8)] for i in range(8)]
    m = matmul(matmul(_unimodular(rng, 8), d), _unimodular(rng, 8))
    assert smith_normal_form(m) == ((1, 2, 2, 6, 12, 36), 6)
    assert invariant_factors_by_minors(m) == (1, 2, 2, 6, 12, 36)


def test_bareiss_oracle_sanity():
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3


@given(small_mats, st.sampled_from([2, 3, 5]))
def test_rank_mod_p_from_snf(m, p):
    diag, _ = smith_normal_form(m)
    assert rank_mod_p(m, p) == sum(1 for d in diag if d % p)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("coeff", [0, 2, 3])
def test_cp_fixture(n, coeff):
    h = space_homology(f"CP({n})", 0, coeff)
    for d in range(2 * n + 3):
        if coeff == 0:
            assert h.group(d) == G(*_flat(cp_homology(n, d)))
        else:
            assert h.rank(d) == mod_p_dim(lambda e: cp_homology(n, e), d, coeff)


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("coeff", [0, 2, 3])
def test_rp_fixture(n, coeff):
    h = space_homology(f"RP({n})", 0, coeff)
    for d in range(n + 2):
        if coeff == 0:
            assert h.group(d) == G(*_flat(rp_homology(n, d)))
        else:
            assert h.rank(d) == mod_p_dim(lambda e: rp_homology(n, e), d, coeff)


@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 11) for m in range(0, n)])
@pytest.mark.parametrize("coeff", [0, 2, 3])
def test_stunted_fixture(n, m, coeff):
    h = space_homology(f"CP({n})/CP({m})", 0, coeff, reduced=True)
    for d in range(2 * n + 2):
        if coeff == 0:
            assert h.group(d) == G(*_flat(stunted_homology(n, m, d)))
        else:
            assert h.rank(d) == mod_p_dim(lambda e: stunted_homology(n, m, e), d, coeff)


def _flat(g):
    free, tors = g
    return (free, *tors)


def test_infinite_spaces_are_truncated():
    h = space_homology("CP(inf)", 10)
    assert h.valid_through == 9
    assert h.group(8) == G(1)
    with pytest.raises(HomologyError, match="beyond the valid range"):
        h.group(12)


def test_rp_infinity():
    h = space_homology("RP(inf)", 8)
    assert [str(h.group(d)) for d in range(7)] == ["Z", "Z/2", "0", "Z/2", "0", "Z/2", "0"]


def test_sphere_point_suspension():
    assert space_homology("S(3)", 0).table() == space_homology("S(3)", 0).table()
    s3 = space_homology("S(3)", 0)
    assert [str(s3.group(d)) for d in range(5)] == ["Z", "0", "0", "Z", "0"]
    assert str(space_homology("point", 0).group(0)) == "Z"
    srp = space_homology("susp(RP(2))", 0, reduced=True)
    assert [str(srp.group(d)) for d in range(4)] == ["0", "0", "Z/2", "0"]


def test_unknown_space():
    with pytest.raises(HomologyError):
        standard_space_complex("HP(2)", 4)


def test_not_a_chain_complex():
    c = ChainComplex([1, 1, 1], {1: [[1]], 2: [[1]]}, name="bad")
    with pytest.raises(HomologyError, match="not a chain complex"):
        homology_of_complex(c)


def test_boundary_shape_checked():
    with pytest.raises(HomologyError, match="wrong shape"):
        ChainComplex([1, 2], {1: [[1]]})


@given(st.integers(1, 6), st.sampled_from([2, 3, 5]))
def test_uct_consistency(n, p):
    integral = space_homology(f"RP({n})", 0)
    direct = space_homology(f"RP({n})", 0, p)
    assert integral.with_coefficients(p).groups == direct.groups


def test_product_complex_kunneth_rp2_rp2():
    c = product_complex(standard_space_complex("RP(2)", 0), standard_space_complex("RP(2)", 0))
    h = homology_of_complex(c)
    # Z, Z/2^2, Z/2, Z/2, 0 by Künneth
    assert [str(h.group(d)) for d in range(5)] == ["Z", "Z/2+Z/2", "Z/2", "Z/2", "0"]


def test_smash_reduced_kunneth():
    a = space_homology("RP(2)", 0, reduced=True)
    b = space_homology("RP(2)", 0, reduced=True)
    s = smash_homology(a, b)
    assert [str(s.group(d)) for d in range(5)] == ["0", "0", "Z/2", "Z/2", "0"]
    with pytest.raises(HomologyError):
        smash_homology(space_homology("RP(2)", 0), b)


def test_thom_shift():
    base = space_homology("CP(2)", 0)
    t = thom_space_homology(base, 2)
    assert [t.rank(d) for d in range(9)] == [0, 0, 0, 0, 1, 0, 1, 0, 1]
    t2 = thom_space_homology(space_homology("RP(3)", 0), 1, coeff=2)
    assert [t2.rank(d) for d in range(6)] == [0, 0, 1, 1, 1, 1]
    with pytest.raises(HomologyError):
        thom_space_homology(base, 0)

import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import morin_literal, morin_sum_over_eta, product_rank
from qhol.cobordism import (
    BRANCH_PRESETS,
    CobordismError,
    RankQuery,
    branch_locus_class,
    branch_preset_result,
    downward_closure_gaps,
    fold_bundle_w2,
    fold_cobordism_analysis,
    fold_torsion_primes,
    morin_crosscheck,
    morin_rank_closed_form,
    rational_rank,
    thom_space_stable_homotopy,
    verify_prop_txi,
)
from qhol.char_ring import projective_product_ring, projective_ring
from qhol.groups import FgAbelianGroup
from qhol.registry import SingularityClass, builtin_singularity, morin_set, parse_group


def Q(names, n, k):
    return RankQuery(tuple(builtin_singularity(s, k) for s in names), n, k)


@pytest.mark.parametrize("n", range(0, 12))
def test_sigma0_k1(n):
    assert rational_rank(Q(["Sigma0"], n, 1)) == (1 if n % 2 == 0 else 0)


def test_fold_rank_n4():
    assert rational_rank(Q(["Sigma0", "A1"], 4, 1)) == 2


@given(st.integers(0, 30), st.integers(0, 4), st.integers(0, 4))
def test_rank_matches_kunneth_oracle(n, k, r):
    q = RankQuery(tuple(morin_set(r, k)), n, k)
    assert rational_rank(q) == morin_sum_over_eta(n, k, r)


@given(st.integers(0, 30), st.integers(0, 3))
def test_rank_additive_over_disjoint_union(n, k):
    a = ["Sigma0", "A2"]
    b = ["A1", "A3"]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        total = rational_rank(Q(a + b, n, k))
        assert total == rational_rank(Q(a, n, k)) + rational_rank(Q(b, n, k))


def test_not_downward_closed_warns():
    with pytest.warns(UserWarning, match="A1"):
        rational_rank(Q(["Sigma0", "A2"], 8, 1))
    assert downward_closure_gaps(morin_set(3, 1), 1) == []


def test_query_validation():
    with pytest.raises(CobordismError):
        RankQuery((), -1, 1)
    s = builtin_singularity("A1", 1)
    with pytest.raises(CobordismError):
        RankQuery((s, s), 2, 1)


@pytest.mark.filterwarnings("ignore:singularity set is not downward closed")
def test_user_class_with_wreath():
    g = parse_group("U(1)", wreath=2)
    s = SingularityClass("W", 1, 1, g, source="test")
    # H_0 and H_2 of B(U(1) wr S_2) have dimension 1 each; degree n - 2
    assert rational_rank(RankQuery((s,), 2, 1)) == 1
    assert rational_rank(RankQuery((s,), 4, 1)) == 1
    assert rational_rank(RankQuery((s,), 6, 1)) == 2


@pytest.mark.parametrize("n, k, r, expected", [(4, 1, 1, 2), (2, 1, 1, 1), (7, 2, 3, 0), (10, 2, 1, 11)])
def test_morin_closed_form(n, k, r, expected):
    assert morin_rank_closed_form(n, k, r) == expected
    assert morin_rank_closed_form(n, k, r) == morin_literal(n, k, r)


def test_morin_crosscheck_examples():
    c = morin_crosscheck(6, 1, 1)
    assert c.status == "agree" and c.closed_form == 3
    c = morin_crosscheck(4, 1, 2)
    assert c.status == "agree" and c.closed_form == 2
    c = morin_crosscheck(10, 2, 1)
    assert c.status == "mismatch" and (c.closed_form, c.sum_over_eta) == (11, 7)
    assert c.to_json()["status"] == "mismatch"


def test_oracle_kunneth_for_the_mismatch():
    # H_4(BU(1) x BU(2)) = p_2(0) + p_2(1) + p_2(2) = 4 and H_10(BU(2)) = p_2(5) = 3
    assert product_rank([1, 2], 4) == 4
    assert product_rank([2], 10) == 3


def test_w2_is_first_generator():
    base = projective_product_ring(2, 4).mod2()
    assert fold_bundle_w2() == base.gen("a")


def test_thom_space_facts():
    for m in range(6):
        assert thom_space_stable_homotopy(m)[0].group == FgAbelianGroup()
    assert thom_space_stable_homotopy(6)[0].group == FgAbelianGroup(1)
    assert thom_space_stable_homotopy(7)[0].group == FgAbelianGroup()
    t8, why = thom_space_stable_homotopy(8)
    assert t8.kind == "unknown" and t8.rank == 2 and "rank" in why


@pytest.mark.parametrize("n, expected", [(0, "Z"), (1, "0"), (2, "Z"), (3, "0"), (4, "Z^2")])
def test_fold_groups(n, expected):
    fa = fold_cobordism_analysis(n)
    assert str(fa.qhol) == expected
    assert fa.solved.trace


def test_fold_n5_candidates():
    fa = fold_cobordism_analysis(5)
    assert fa.qhol.candidates == (FgAbelianGroup(), FgAbelianGroup(0, (2,)))
    assert any("nontrivial" in f for f in fa.facts)


@pytest.mark.parametrize("n", range(6))
def test_fold_rank_matches_sum_over_eta(n):
    assert fold_cobordism_analysis(n).rational_rank == rational_rank(RankQuery(tuple(morin_set(1, 1)), n, 1))


def test_fold_range_checked():
    with pytest.raises(CobordismError):
        fold_cobordism_analysis(6)


@pytest.mark.parametrize("n, p_max, certified", [(5, 13, [7, 11, 13]), (0, 11, [3, 5, 7, 11]), (3, 7, [5, 7])])
def test_torsion_primes_examples(n, p_max, certified):
    assert fold_torsion_primes(n, p_max).certified == certified


def test_torsion_prime_53_at_100():
    t = fold_torsion_primes(100, 61)
    assert 53 in t.certified and 47 not in t.certified
    assert t.reports[53].in_serre_range


def test_txi_examples():
    rep = verify_prop_txi(10)
    rows = {(r["degree"], r["coeff"]): r for r in rep.rows}
    assert rows[(6, "Z")]["thom"] == rows[(6, "Z")]["smash"] == "Z"
    assert rows[(10, "Z")]["thom"] == "Z^3"
    assert rows[(7, "Z")]["thom"] == "0"
    assert rep.all_equal
    with pytest.raises(CobordismError):
        verify_prop_txi(5)


def test_branch_presets():
    assert branch_preset_result("double-cover-cp1")["pairing"] == 2
    assert branch_preset_result("identity-cp1")["pairing"] == 0
    assert branch_preset_result("torus-cover-3")["pairing"] == 0
    with pytest.raises(CobordismError):
        branch_preset_result("nope")


@given(st.integers(1, 6))
def test_riemann_hurwitz_for_cp1_power_maps(d):
    # z -> z^d: branch points counted with multiplicity 2(d - 1)
    r = projective_ring(1, 2)
    x = r.gen("x")
    c = (1 + x) ** 2
    cls = branch_locus_class(c, c, {"x": d * x})
    assert cls.terms.get((1,), 0) == 2 * (d - 1)


def test_branch_incompatible_presentations():
    r1, r2 = projective_ring(1, 2), projective_ring(2, 4)
    with pytest.raises(CobordismError):
        branch_locus_class(r1.one(), r1.one(), {"x": r2.gen("x")})

from itertools import product
from math import gcd, lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhol.groups import (
    FgAbelianGroup,
    GroupError,
    direct_sum,
    group_arith,
    invariant_factors,
    mod_p_dimension,
    p_part,
    quotient_types,
    tensor,
    tor,
)

orders = st.lists(st.integers(1, 60), max_size=5)
groups = st.builds(FgAbelianGroup, st.integers(0, 3), orders.map(tuple))


def test_invariant_factors_normalize():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([4, 6]) == (2, 12)
    assert invariant_factors([1, 1, 5]) == (5,)


def test_invariant_factors_reject_zero():
    with pytest.raises(GroupError):
        invariant_factors([0])


@given(orders)
def test_invariant_factors_chain_and_order(os_):
    ds = invariant_factors(os_)
    assert all(b % a == 0 for a, b in zip(ds, ds[1:]))
    prod_in, prod_out = 1, 1
    for d in os_:
        prod_in *= d
    for d in ds:
        prod_out *= d
    assert prod_in == prod_out


@pytest.mark.parametrize("text, group", [
    ("0", FgAbelianGroup()),
    ("Z", FgAbelianGroup(1)),
    ("Z^2+Z/2", FgAbelianGroup(2, (2,))),
    ("Z/2 (+) Z/3", FgAbelianGroup(0, (6,))),
    ("Z/2^3", FgAbelianGroup(0, (2, 2, 2))),
])
def test_parse(text, group):
    assert FgAbelianGroup.parse(text) == group


def test_parse_rejects_garbage():
    with pytest.raises(GroupError):
        FgAbelianGroup.parse("Q")


@given(groups)
def test_str_parse_roundtrip(g):
    assert FgAbelianGroup.parse(str(g)) == g


@given(groups)
def test_json_roundtrip(g):
    assert FgAbelianGroup.from_json(g.to_json()) == g


def test_cyclic_zero_is_Z():
    assert FgAbelianGroup.cyclic(0) == FgAbelianGroup(1)
    assert FgAbelianGroup.cyclic(1).is_zero


def test_p_part():
    g = FgAbelianGroup(1, (12, 18))
    assert p_part(g, 2) == FgAbelianGroup(0, (2, 4))
    assert p_part(g, 3) == FgAbelianGroup(0, (3, 9))
    assert p_part(g, 5).is_zero
    with pytest.raises(GroupError):
        p_part(g, 4)


def test_group_arith_dispatch():
    a, b = FgAbelianGroup(1), FgAbelianGroup(0, (2,))
    assert group_arith(a, b, "direct_sum") == FgAbelianGroup(1, (2,))
    assert group_arith(a, None, "rational_rank") == 1
    with pytest.raises(GroupError):
        group_arith(a, b, "quotient")


@given(groups, groups)
def test_tensor_and_tor_symmetric(a, b):
    assert tensor(a, b) == tensor(b, a)
    assert tor(a, b) == tor(b, a)


@given(groups)
def test_tensor_with_Z_is_identity(a):
    assert tensor(a, FgAbelianGroup(1)) == a
    assert tor(a, FgAbelianGroup(1)).is_zero


def _subgroup_types_brute(ds):
    """Subgroup isomorphism types of ``Z/d1 + Z/d2`` by closing every pair of elements.

    Two generators suffice for these groups; a finite abelian group is
    determined by the multiset of its element orders.
    """
    elems = list(product(*[range(d) for d in ds]))

    def add(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, ds))

    def order(x):
        o = 1
        for a, d in zip(x, ds):
            o = lcm(o, d // gcd(a, d))
        return o

    seen = set()
    for g in elems:
        for h in elems:
            sub = {tuple(0 for _ in ds)}
            frontier = list(sub)
            while frontier:
                x = frontier.pop()
                for y in (add(x, g), add(x, h)):
                    if y not in sub:
                        sub.add(y)
                        frontier.append(y)
            seen.add(tuple(sorted(order(x) for x in sub)))
    return seen


@pytest.mark.parametrize("ds", [(2,), (4,), (2, 2), (2, 4), (6,), (3, 3), (2, 6)])
def test_quotient_types_count_matches_brute(ds):
    types = quotient_types(FgAbelianGroup(0, ds))
    assert len(types) == len(_subgroup_types_brute(ds))


def test_quotient_types_examples():
    assert quotient_types(FgAbelianGroup(0, (2,))) == [FgAbelianGroup(), FgAbelianGroup(0, (2,))]
    with pytest.raises(GroupError):
        quotient_types(FgAbelianGroup(1))


def test_mod_p_dimension_uct():
    # RP^3: Z, Z/2, 0, Z
    gs = [FgAbelianGroup(1), FgAbelianGroup(0, (2,)), FgAbelianGroup(), FgAbelianGroup(1)]
    assert [mod_p_dimension(gs, d, 2) for d in range(4)] == [1, 1, 1, 1]
    assert [mod_p_dimension(gs, d, 3) for d in range(4)] == [1, 0, 0, 1]

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from oracles import total_chern_sympy
from qhol.char_ring import (
    RingError,
    RingPresentation,
    ThomPolynomial,
    fold_thom_polynomial,
    inverse_total_class,
    line_bundle_c1,
    line_bundle_chern,
    pair_fundamental,
    parse_line_bundle_sum,
    projective_product_ring,
    projective_ring,
    ring_arith,
    sw_from_chern,
    tp_evaluate,
)

weights = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=0, max_size=4)


def test_truncation_and_nilpotency():
    r = projective_ring(2, cap=10)
    x = r.gen("x")
    assert not x ** 3
    assert x ** 2
    assert not projective_ring(None, cap=4).gen("x") ** 3


def test_presentation_validation():
    with pytest.raises(RingError):
        RingPresentation(("x",), (3,), 6)
    with pytest.raises(RingError):
        RingPresentation(("x", "x"), (2, 2), 6)
    with pytest.raises(RingError):
        RingPresentation(("x",), (2,), 4, (), modulus=3)


def test_mixing_presentations_fails():
    a = projective_ring(2, 4).gen("x")
    b = projective_ring(3, 4).gen("x")
    with pytest.raises(RingError):
        a + b


def test_mod2_reduction():
    r = projective_ring(None, 6).mod2()
    x = r.gen("x")
    assert not 2 * x
    assert (x + x * 3) == r.zero()


@given(weights)
def test_chern_class_matches_sympy(w):
    base = projective_product_ring(2, cap=8)
    c = line_bundle_chern(w, base)
    a, b = sympy.symbols("a b")
    ref = total_chern_sympy(w, (a, b))
    for (i, j), coeff in ref.terms():
        if 2 * (i + j) <= 8:
            assert c.terms.get((i, j), 0) == coeff
    assert all(ref.coeff_monomial(a ** i * b ** j) == v for (i, j), v in c.terms.items())


@given(weights)
def test_inverse_total_class(w):
    base = projective_product_ring(2, cap=8)
    c = line_bundle_chern(w, base)
    assert c * inverse_total_class(c) == base.one()


def test_inverse_requires_unit_constant():
    r = projective_ring(None, 4)
    with pytest.raises(RingError):
        inverse_total_class(r.constant(2) + r.gen("x"))


def test_ring_arith_dispatch():
    r = projective_ring(None, 4)
    x = r.gen("x")
    assert ring_arith(x, x, "add") == 2 * x
    assert ring_arith(x, x, "mul") == x ** 2
    assert ring_arith(1 + x, None, "inverse_total_class") == 1 - x + x ** 2
    with pytest.raises(RingError):
        ring_arith(x, x, "div")


def test_parse_line_bundle_sum():
    assert parse_line_bundle_sum("(2,0)+(0,1)+(-1,1)") == [(2, 0), (0, 1), (-1, 1)]
    assert parse_line_bundle_sum("") == []
    with pytest.raises(RingError):
        parse_line_bundle_sum("(2,0)+0,1")
    with pytest.raises(RingError):
        line_bundle_c1((1, 2, 3), projective_product_ring(2, 4))


def test_fold_bundle_total_class():
    base = projective_product_ring(2, cap=6)
    c = line_bundle_chern(parse_line_bundle_sum("(2,0)+(0,1)+(-1,1)"), base)
    a, b = base.gen("a"), base.gen("b")
    assert c.component(2) == a + 2 * b
    assert c.component(4) == -2 * a ** 2 + 3 * a * b + b ** 2
    w = sw_from_chern(c)
    assert w.component(2) == a.__class__(base.mod2(), {(1, 0): 1})


def test_thom_polynomial():
    tp = fold_thom_polynomial(1)
    assert tp.degree == 4 and tp.variables == {2}
    r = projective_ring(None, 6)
    x = r.gen("x")
    assert tp_evaluate(tp, [3 * x, 5 * x ** 2]) == 5 * x ** 2
    with pytest.raises(RingError):
        tp_evaluate(tp, [3 * x])
    with pytest.raises(RingError):
        tp_evaluate(tp, [3 * x, x])
    with pytest.raises(RingError):
        ThomPolynomial.chern(0)


def test_pairing():
    r = projective_ring(1, 2)
    x = r.gen("x")
    assert pair_fundamental(2 * x, (1,)) == 2
    assert pair_fundamental(r.zero(), (1,)) == 0
    with pytest.raises(RingError):
        pair_fundamental(r.one(), (1,))


def test_substitute_is_a_homomorphism():
    src = projective_ring(None, 6)
    tgt = projective_product_ring(2, 6)
    x = src.gen("x")
    img = {"x": tgt.gen("a") + tgt.gen("b")}
    p, q = 1 + 2 * x, 1 - x + x ** 2
    assert (p * q).substitute(img, tgt) == p.substitute(img, tgt) * q.substitute(img, tgt)
    with pytest.raises(RingError):
        p.substitute({}, tgt)

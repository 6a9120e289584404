"""Truncated graded polynomial rings for Chern and Stiefel-Whitney class algebra.

All generators carry positive even degree, so the rings are commutative.
Relations are monomial only: a per-generator nilpotency exponent models
``H^*(CP^n) = Z[x]/(x^(n+1))`` and a total-degree cap models ``CP^infinity``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

Exponents = tuple[int, ...]


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class RingPresentation:
    generators: tuple[str, ...]
    degrees: tuple[int, ...]
    cap: int
    nilpotency: tuple[Optional[int], ...] = ()
    modulus: int = 0  # 0 for Z, 2 for Z/2

    def __post_init__(self):
        if len(self.generators) != len(self.degrees):
            raise RingError("one degree per generator required")
        if len(set(self.generators)) != len(self.generators):
            raise RingError(f"duplicate generator names in {self.generators}")
        if not self.nilpotency:
            object.__setattr__(self, "nilpotency", (None,) * len(self.generators))
        if len(self.nilpotency) != len(self.generators):
            raise RingError("one nilpotency bound per generator required")
        if any(d <= 0 or d % 2 for d in self.degrees):
            raise RingError(f"generator degrees must be positive and even: {self.degrees}")
        if any(e is not None and e < 1 for e in self.nilpotency):
            raise RingError(f"nilpotency exponents must be >= 1: {self.nilpotency}")
        if self.cap < 0:
            raise RingError("cap must be nonnegative")
        if self.modulus not in (0, 2):
            raise RingError("only Z (modulus 0) and Z/2 (modulus 2) coefficients are supported")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def mod2(self) -> RingPresentation:
        return RingPresentation(self.generators, self.degrees, self.cap, self.nilpotency, 2)

    def monomial_degree(self, e: Exponents) -> int:
        return sum(a * d for a, d in zip(e, self.degrees))

    def admissible(self, e: Exponents) -> bool:
        if self.monomial_degree(e) > self.cap:
            return False
        return all(b is None or a < b for a, b in zip(e, self.nilpotency))

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise RingError(f"no generator named {name!r} in {self.generators}") from None

    # element constructors

    def zero(self) -> RingElement:
        return RingElement(self, {})

    def one(self) -> RingElement:
        return self.constant(1)

    def constant(self, c: int) -> RingElement:
        return RingElement(self, {(0,) * self.rank: c})

    def gen(self, name: str) -> RingElement:
        e = [0] * self.rank
        e[self.index(name)] = 1
        return RingElement(self, {tuple(e): 1})

    def monomial(self, exponents: Sequence[int], coeff: int = 1) -> RingElement:
        if len(exponents) != self.rank:
            raise RingError(f"exponent vector {tuple(exponents)} has wrong length")
        return RingElement(self, {tuple(exponents): coeff})


def projective_ring(n: Optional[int], cap: int, name: str = "x") -> RingPresentation:
    """``H^*(CP^n; Z)``; ``n=None`` means ``CP^infinity`` truncated at ``cap``."""
    return RingPresentation((name,), (2,), cap, (None if n is None else n + 1,))


def projective_product_ring(
    count: int, cap: int, names: Sequence[str] = ("a", "b", "c", "d")
) -> RingPresentation:
    """``H^*`` of a product of ``count`` copies of ``CP^infinity``."""
    if count > len(names):
        raise RingError(f"need {count} generator names")
    return RingPresentation(tuple(names[:count]), (2,) * count, cap)


class RingElement:
    """Sparse polynomial; treat as immutable."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: RingPresentation, terms: Mapping[Exponents, int]):
        self.presentation = presentation
        m = presentation.modulus
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if m:
                c %= m
            if c and presentation.admissible(e):
                clean[e] = c
        self.terms: dict[Exponents, int] = dict(
            sorted(clean.items(), key=lambda kv: (presentation.monomial_degree(kv[0]), kv[0]))
        )

    def _check(self, other: RingElement):
        if not isinstance(other, RingElement):
            raise RingError(f"expected RingElement, got {type(other).__name__}")
        if other.presentation != self.presentation:
            raise RingError("ring elements live in different presentations")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.presentation.constant(other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return RingElement(self.presentation, t)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.presentation, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.presentation.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.presentation, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        p = self.presentation
        t: dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            d1 = p.monomial_degree(e1)
            for e2, c2 in other.terms.items():
                if d1 + p.monomial_degree(e2) > p.cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return RingElement(p, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative powers are not defined; use inverse_total_class")
        out = self.presentation.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.presentation.constant(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.presentation == other.presentation and self.terms == other.terms

    def __hash__(self):
        return hash((self.presentation, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"RingElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        gens = self.presentation.generators
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                g if a == 1 else f"{g}^{a}" for g, a in zip(gens, e) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    @property
    def constant_term(self) -> int:
        return self.terms.get((0,) * self.presentation.rank, 0)

    def component(self, degree: int) -> RingElement:
        p = self.presentation
        return RingElement(p, {e: c for e, c in self.terms.items() if p.monomial_degree(e) == degree})

    def degrees(self) -> list[int]:
        p = self.presentation
        return sorted({p.monomial_degree(e) for e in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element; ``None`` for zero."""
        ds = self.degrees()
        if len(ds) > 1:
            raise RingError(f"element {self} is not homogeneous (degrees {ds})")
        return ds[0] if ds else None

    def substitute(self, images: Mapping[str, RingElement], target: RingPresentation) -> RingElement:
        """Ring homomorphism sending each generator to ``images[name]`` in ``target``."""
        p = self.presentation
        missing = [g for g in p.generators if g not in images]
        if missing:
            raise RingError(f"no image given for generators {missing}")
        out = target.zero()
        powers = {g: [target.one()] for g in p.generators}
        for e, c in self.terms.items():
            term = target.constant(c)
            for g, a in zip(p.generators, e):
                img = images[g]
                if img.presentation != target:
                    raise RingError(f"image of {g} is not in the target presentation")
                pw = powers[g]
                while len(pw) <= a:
                    pw.append(pw[-1] * img)
                term = term * pw[a]
            out = out + term
        return out


def ring_arith(a: RingElement, b: Optional[RingElement], op: str) -> RingElement:
    """Dispatch ``add``, ``mul`` or ``inverse_total_class`` (``b`` unused)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inverse_total_class":
        return inverse_total_class(a)
    raise RingError(f"unknown op {op!r}")


def inverse_total_class(a: RingElement) -> RingElement:
    """Inverse of an element with constant term 1, e.g. ``c(TM)**-1``."""
    p = a.presentation
    if a.constant_term != 1:
        raise RingError(f"total class must have constant term 1, got {a.constant_term}")
    # a = 1 + u with u nilpotent in the truncated ring: 1/a = sum (-u)^j
    u = a - 1
    out = p.one()
    term = p.one()
    while True:
        term = term * (-u)
        if not term:
            break
        out = out + term
    return out


def line_bundle_c1(weights: Sequence[int], base: RingPresentation) -> RingElement:
    """``c_1`` of ``pr_1^* g^(w_1) (x) pr_2^* g^(w_2) (x) ...`` over ``(CP^inf)^r``.

    Tensor powers add first Chern classes and the dual negates them, so the
    answer is ``sum w_i x_i`` with ``x_i`` the i-th degree-2 generator.
    """
    if not isinstance(weights, (list, tuple)) or not all(isinstance(w, int) for w in weights):
        raise RingError(f"malformed line bundle expression {weights!r}")
    if len(weights) != base.rank or any(d != 2 for d in base.degrees):
        raise RingError(
            f"line bundle {tuple(weights)} needs {len(weights)} degree-2 generators in the base"
        )
    out = base.zero()
    for w, g in zip(weights, base.generators):
        out = out + base.gen(g) * w
    return out


def line_bundle_chern(summands: Iterable[Sequence[int]], base: RingPresentation) -> RingElement:
    """Total Chern class ``prod (1 + c_1(L))`` of a sum of line bundles."""
    out = base.one()
    for w in summands:
        out = out * (1 + line_bundle_c1(w, base))
    return out


def parse_line_bundle_sum(text: str) -> list[tuple[int, ...]]:
    """Parse ``"(2,0)+(0,1)+(-1,1)"`` into weight tuples; ``""`` is the empty sum."""
    text = text.strip()
    if not text:
        return []
    out = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise RingError(f"malformed line bundle term {chunk!r}")
        try:
            out.append(tuple(int(x) for x in chunk[1:-1].split(",")))
        except ValueError:
            raise RingError(f"malformed line bundle term {chunk!r}") from None
    return out


def sw_from_chern(total_chern: RingElement) -> RingElement:
    """Total Stiefel-Whitney class of a complex bundle: its Chern class mod 2.

    ``w_{2i} = c_i mod 2`` and odd classes vanish; degrees are unchanged since
    both are stored in real cohomological degree.
    """
    p = total_chern.presentation
    if p.modulus != 0:
        raise RingError("expected an integral total Chern class")
    return RingElement(p.mod2(), total_chern.terms)


def pair_fundamental(x: RingElement, fundamental: Sequence[int]) -> int:
    """Evaluate a top-degree class on the fundamental class dual to ``fundamental``."""
    p = x.presentation
    fundamental = tuple(fundamental)
    top = p.monomial_degree(fundamental)
    if x and x.degree != top:
        raise RingError(f"class of degree {x.degree} cannot pair with a degree-{top} cycle")
    return x.terms.get(fundamental, 0)


@dataclass(frozen=True)
class ThomPolynomial:
    """Integer polynomial in ``c_1, c_2, ...``; key ``e`` means ``prod c_(i+1)^e[i]``."""

    terms: Mapping[Exponents, int] = field(default_factory=dict)
    name: str = ""

    @classmethod
    def chern(cls, i: int, name: str = "") -> ThomPolynomial:
        if i < 1:
            raise RingError("Chern variables start at c_1")
        return cls({(0,) * (i - 1) + (1,): 1}, name or f"c{i}")

    @property
    def variables(self) -> set[int]:
        return {i + 1 for e in self.terms for i, a in enumerate(e) if a}

    def degrees(self) -> set[int]:
        return {sum(2 * (i + 1) * a for i, a in enumerate(e)) for e, c in self.terms.items() if c}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise RingError(f"Thom polynomial {self.name or self.terms} is not homogeneous")
        return ds.pop()

    def evaluate(self, normal_chern: Sequence[RingElement]) -> RingElement:
        return tp_evaluate(self, normal_chern)


def fold_thom_polynomial(k: int) -> ThomPolynomial:
    """``Tp(A_1) = c_(k+1)`` for fold maps of complex codimension ``k``."""
    return ThomPolynomial.chern(k + 1, name="Tp(A1)")


def tp_evaluate(tp: ThomPolynomial, normal_chern: Sequence[RingElement]) -> RingElement:
    """Substitute ``normal_chern[i-1]`` for ``c_i``."""
    needed = max(tp.variables, default=0)
    if len(normal_chern) < needed:
        raise RingError(f"{tp.name or 'Thom polynomial'} uses c_{needed}; only {len(normal_chern)} classes given")
    if not normal_chern:
        raise RingError("no normal Chern classes given")
    p = normal_chern[0].presentation
    for i, c in enumerate(normal_chern, start=1):
        if c.presentation != p:
            raise RingError("normal Chern classes live in different presentations")
        if c and (not c.is_homogeneous() or c.degree != 2 * i):
            raise RingError(f"c_{i} must be homogeneous of degree {2 * i}, got {c}")
    out = p.zero()
    for e, coeff in tp.terms.items():
        term = p.constant(coeff)
        for i, a in enumerate(e):
            if a:
                term = term * normal_chern[i] ** a
        out = out + term
    return out

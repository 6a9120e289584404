"""Truncated integer power series in one variable.

Poincaré series are kept in real (homological) degree: a generator of
complex degree ``d`` sits at ``t**(2*d)``. Coefficients are Python ints,
so there is no overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of ``t**0 .. t**cap``; degrees above ``cap`` are unknown."""

    cap: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.cap < 0:
            raise SeriesError(f"cap must be nonnegative, got {self.cap}")
        if len(self.coeffs) != self.cap + 1:
            raise SeriesError(
                f"expected {self.cap + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], cap: int) -> TruncatedSeries:
        """Pad with zeros or drop entries so exactly ``cap + 1`` remain."""
        c = [int(x) for x in coeffs][: cap + 1]
        c += [0] * (cap + 1 - len(c))
        return cls(cap, tuple(c))

    @classmethod
    def zero(cls, cap: int) -> TruncatedSeries:
        return cls(cap, (0,) * (cap + 1))

    @classmethod
    def one(cls, cap: int) -> TruncatedSeries:
        return cls.from_coeffs([1], cap)

    @classmethod
    def monomial(cls, degree: int, cap: int, coeff: int = 1) -> TruncatedSeries:
        c = [0] * (cap + 1)
        if degree <= cap:
            c[degree] = coeff
        return cls(cap, tuple(c))

    def __getitem__(self, degree: int) -> int:
        if degree < 0:
            return 0
        if degree > self.cap:
            raise SeriesError(
                f"degree {degree} is above the cap {self.cap}; recompute with a larger cap"
            )
        return self.coeffs[degree]

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_combine(self, other, "add")

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_combine(self, other, "mul")

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.cap, tuple(-x for x in self.coeffs))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def truncate(self, cap: int) -> TruncatedSeries:
        if cap > self.cap:
            raise SeriesError(f"cannot extend cap {self.cap} to {cap}")
        return TruncatedSeries(cap, self.coeffs[: cap + 1])

    def __str__(self):
        terms = [f"{c}*t^{d}" for d, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" + O(t^{self.cap + 1})"


def series_combine(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    """Coefficientwise sum or truncated Cauchy product at ``min(a.cap, b.cap)``."""
    cap = min(a.cap, b.cap)
    if op == "add":
        return TruncatedSeries(cap, tuple(a.coeffs[d] + b.coeffs[d] for d in range(cap + 1)))
    if op == "mul":
        out = [0] * (cap + 1)
        for i in range(cap + 1):
            ai = a.coeffs[i]
            if not ai:
                continue
            for j in range(cap + 1 - i):
                if b.coeffs[j]:
                    out[i + j] += ai * b.coeffs[j]
        return TruncatedSeries(cap, tuple(out))
    raise SeriesError(f"unknown op {op!r}; expected 'add' or 'mul'")


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to ``a.cap``; the constant term must be +1 or -1."""
    c0 = a.coeffs[0]
    if c0 not in (1, -1):
        raise SeriesError(
            f"constant term {c0} is not a unit in Z; only series starting with 1 or -1 invert"
        )
    out = [0] * (a.cap + 1)
    out[0] = c0  # 1/c0 == c0 for units
    for d in range(1, a.cap + 1):
        s = sum(a.coeffs[i] * out[d - i] for i in range(1, d + 1))
        out[d] = -c0 * s
    return TruncatedSeries(a.cap, tuple(out))


def geometric(step: int, cap: int) -> TruncatedSeries:
    """``1/(1 - t**step)``."""
    return TruncatedSeries(cap, tuple(1 if d % step == 0 else 0 for d in range(cap + 1)))


def partition_generating_series(k: int, cap: int) -> TruncatedSeries:
    """``prod_{i=1..k} 1/(1 - t**i)`` truncated at ``cap``."""
    s = TruncatedSeries.one(cap)
    for i in range(1, k + 1):
        s = s * series_inverse(TruncatedSeries.one(cap) - TruncatedSeries.monomial(i, cap))
    return s


def partition_count(k: int, m: int) -> int:
    """Number of partitions of ``m`` into parts of size at most ``k``."""
    if k < 1:
        raise SeriesError(f"k must be positive, got {k}")
    if m < 0:
        return 0
    return partition_generating_series(k, m)[m]


def symmetric_power_series(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """Poincaré series of the degreewise symmetric ``m``-th power of a graded space.

    Extracts the ``z**m`` coefficient of ``prod_d (1 - z t**d)**(-a_d)`` where
    ``a_d = f[d]``. Only even-graded inputs are meaningful here (all classifying
    spaces in scope have no odd rational homology), so no sign rule is applied.
    """
    if m < 1:
        raise SeriesError(f"m must be positive, got {m}")
    if any(c < 0 for c in f.coeffs):
        raise SeriesError("symmetric power needs nonnegative coefficients")
    cap = f.cap
    # poly[j][d]: coefficient of z**j t**d, for j <= m
    poly = [[0] * (cap + 1) for _ in range(m + 1)]
    poly[0][0] = 1
    for d, a in enumerate(f.coeffs):
        if not a:
            continue
        # (1 - z t^d)^(-a) = sum_s C(a+s-1, s) z^s t^{ds}
        factor = []
        s = 0
        while s <= m and d * s <= cap:
            factor.append((s, comb(a + s - 1, s)))
            s += 1
        new = [[0] * (cap + 1) for _ in range(m + 1)]
        for j in range(m + 1):
            row = poly[j]
            for deg in range(cap + 1):
                v = row[deg]
                if not v:
                    continue
                for s, c in factor:
                    jj, dd = j + s, deg + d * s
                    if jj > m or dd > cap:
                        continue
                    new[jj][dd] += v * c
        poly = new
    return TruncatedSeries(cap, tuple(poly[m]))

"""Finitely generated abelian groups in invariant-factor form."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterable, Optional, Union

from sympy import factorint, isprime


class GroupError(ValueError):
    pass


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Normalize cyclic orders into ``d_1 | d_2 | ...`` with every ``d_i >= 2``.

    Orders 1 are dropped; 0 and negatives are rejected (free summands are
    tracked separately).
    """
    ds = []
    for d in orders:
        d = int(d)
        if d < 1:
            raise GroupError(f"cyclic order must be positive, got {d}")
        if d > 1:
            ds.append(d)
    # repeated (gcd, lcm) replacement converges to the divisibility chain
    changed = True
    while changed:
        changed = False
        ds.sort()
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a * b // g
                    changed = True
        ds = [d for d in ds if d > 1]
    return tuple(sorted(ds))


@dataclass(frozen=True, order=True)
class FgAbelianGroup:
    free: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free < 0:
            raise GroupError(f"free rank must be nonnegative, got {self.free}")
        norm = invariant_factors(self.torsion)
        object.__setattr__(self, "torsion", norm)

    @classmethod
    def cyclic(cls, n: int) -> FgAbelianGroup:
        """``Z/n``; ``n=0`` gives ``Z``."""
        return cls(1) if n == 0 else cls(0, (n,))

    @classmethod
    def zero(cls) -> FgAbelianGroup:
        return cls()

    @classmethod
    def parse(cls, text: str) -> FgAbelianGroup:
        """Parse ``"0"``, ``"Z"``, ``"Z^2+Z/2+Z/4"`` (``(+)`` also accepted)."""
        text = text.replace("(+)", "+").replace("⊕", "+").replace(" ", "")
        if text in ("0", ""):
            return cls()
        free, tors = 0, []
        for part in text.split("+"):
            if part == "Z":
                free += 1
            elif part.startswith("Z^"):
                free += int(part[2:])
            elif part.startswith("Z/"):
                n, _, e = part[2:].partition("^")
                tors += [int(n)] * (int(e) if e else 1)
            else:
                raise GroupError(f"cannot parse group summand {part!r}")
        return cls(free, tuple(tors))

    @property
    def is_zero(self) -> bool:
        return self.free == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free == 0

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def is_cyclic(self) -> bool:
        return self.free + len(self.torsion) <= 1

    @property
    def order(self) -> Optional[int]:
        if self.free:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __add__(self, other: FgAbelianGroup) -> FgAbelianGroup:
        return direct_sum(self, other)

    def __str__(self):
        parts = []
        if self.free == 1:
            parts.append("Z")
        elif self.free > 1:
            parts.append(f"Z^{self.free}")
        parts += [f"Z/{d}" for d in self.torsion]
        return "+".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free": self.free, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, d: dict) -> FgAbelianGroup:
        return cls(d["free"], tuple(d["torsion"]))


def direct_sum(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    return FgAbelianGroup(a.free + b.free, a.torsion + b.torsion)


def _require_prime(p: int):
    if not isprime(p):
        raise GroupError(f"{p} is not prime")


def p_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_part(a: FgAbelianGroup, p: int) -> FgAbelianGroup:
    """The ``p``-primary torsion subgroup."""
    _require_prime(p)
    return FgAbelianGroup(0, tuple(p ** p_valuation(d, p) for d in a.torsion))


def rational_rank(a: FgAbelianGroup) -> int:
    return a.free


def group_arith(a: FgAbelianGroup, b: Optional[FgAbelianGroup], op: str,
                p: Optional[int] = None) -> Union[FgAbelianGroup, int]:
    if op == "direct_sum":
        return direct_sum(a, b)
    if op == "p_part":
        return p_part(a, p)
    if op == "rational_rank":
        return rational_rank(a)
    raise GroupError(f"unknown op {op!r}")


def tensor(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    tors = [d for d in b.torsion for _ in range(a.free)]
    tors += [d for d in a.torsion for _ in range(b.free)]
    tors += [gcd(d, e) for d in a.torsion for e in b.torsion]
    return FgAbelianGroup(a.free * b.free, tuple(tors))


def tor(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    return FgAbelianGroup(0, tuple(gcd(d, e) for d in a.torsion for e in b.torsion))


def _partitions_below(lam: tuple[int, ...]):
    """Partitions ``mu`` with ``mu_i <= lam_i`` (``lam`` weakly decreasing)."""
    if not lam:
        yield ()
        return
    for first in range(lam[0], -1, -1):
        for rest in _partitions_below(tuple(min(x, first) for x in lam[1:])):
            yield (first,) + rest


def quotient_types(a: FgAbelianGroup) -> list[FgAbelianGroup]:
    """All quotients of a finite group up to isomorphism, sorted.

    For finite abelian groups the quotient types coincide with the subgroup
    types: per prime, partitions contained in the group's partition.
    """
    if not a.is_finite:
        raise GroupError(f"{a} is infinite; its quotients do not form a finite set")
    by_prime: dict[int, list[int]] = {}
    for d in a.torsion:
        for p, e in factorint(d).items():
            by_prime.setdefault(p, []).append(e)
    choices = []
    for p in sorted(by_prime):
        lam = tuple(sorted(by_prime[p], reverse=True))
        choices.append([(p, mu) for mu in _partitions_below(lam)])
    out = set()
    for combo in product(*choices):
        orders = [p ** e for p, mu in combo for e in mu if e]
        out.add(FgAbelianGroup(0, tuple(orders)))
    return sorted(out)


def mod_p_dimension(groups: list[FgAbelianGroup], degree: int, p: int) -> int:
    """``dim H_n(X; Z/p)`` from integral groups by universal coefficients.

    ``groups[d]`` is the integral group in degree ``d``.
    """
    g = groups[degree] if 0 <= degree < len(groups) else FgAbelianGroup()
    below = groups[degree - 1] if 0 <= degree - 1 < len(groups) else FgAbelianGroup()
    return g.free + sum(1 for d in g.torsion if d % p == 0) + sum(1 for d in below.torsion if d % p == 0)

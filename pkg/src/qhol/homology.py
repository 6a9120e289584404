"""Cellular chain complexes, Smith normal form, and homology.

Infinite complexes (``CP(inf)`` and friends) are always cut at a caller
supplied truncation degree. Every :class:`HomologyResult` records the last
degree it is valid through; asking for anything above that raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .groups import FgAbelianGroup, mod_p_dimension, tensor, tor

IntMatrix = list[list[int]]


class HomologyError(ValueError):
    pass


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: IntMatrix, b: IntMatrix, inner: Optional[int] = None) -> IntMatrix:
    n = len(a)
    k = len(b) if inner is None else inner
    m = len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        row = a[i]
        for t in range(k):
            if row[t]:
                bt = b[t]
                for j in range(m):
                    out[i][j] += row[t] * bt[j]
    return out


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], int]:
    """Nonzero diagonal of the Smith form (``d_1 | d_2 | ...``, all positive) and the rank.

    Pivots are chosen by minimal absolute value to keep entries small.
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        pivot = _min_abs_entry(a, t, rows, cols)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            # clear column t below the pivot
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        ai, at = a[i], a[t]
                        for c in range(t, cols):
                            ai[c] -= q * at[c]
                    if a[i][t]:
                        done = False
            # clear row t right of the pivot
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for r in range(t, rows):
                            a[r][j] -= q * a[r][t]
                    if a[t][j]:
                        done = False
            if done:
                bad = _non_divisible(a, t, rows, cols)
                if bad is None:
                    break
                # fold offending row into the pivot row, then reduce again
                at, ab = a[t], a[bad]
                for c in range(t, cols):
                    at[c] += ab[c]
            pivot = _min_abs_entry_cross(a, t, rows, cols)
            i, j = pivot
            if (i, j) != (t, t):
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return tuple(diag), len(diag)


def _min_abs_entry(a, t, rows, cols):
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = a[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else (best[1], best[2])


def _min_abs_entry_cross(a, t, rows, cols):
    """Smallest nonzero entry in row ``t`` or column ``t``."""
    best = (abs(a[t][t]), t, t) if a[t][t] else None
    for i in range(t + 1, rows):
        v = a[i][t]
        if v and (best is None or abs(v) < best[0]):
            best = (abs(v), i, t)
    for j in range(t + 1, cols):
        v = a[t][j]
        if v and (best is None or abs(v) < best[0]):
            best = (abs(v), t, j)
    return best[1], best[2]


def _non_divisible(a, t, rows, cols):
    p = a[t][t]
    for i in range(t + 1, rows):
        for j in range(t + 1, cols):
            if a[i][j] % p:
                return i
    return None


def rank_mod_p(m: Sequence[Sequence[int]], p: int) -> int:
    a = [[x % p for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


@dataclass
class ChainComplex:
    """Free ranks per degree ``0..top`` and boundaries ``d -> rows ranks[d-1], cols ranks[d]``.

    ``valid_through`` is the last degree whose homology the complex computes
    correctly; for a finite CW complex that is its dimension and ``complete``
    is true (everything above vanishes).
    """

    ranks: list[int]
    boundaries: dict[int, IntMatrix] = field(default_factory=dict)
    valid_through: Optional[int] = None
    complete: bool = True
    name: str = ""

    def __post_init__(self):
        if self.valid_through is None:
            self.valid_through = len(self.ranks) - 1
        for d, mat in self.boundaries.items():
            if not 1 <= d < len(self.ranks):
                raise HomologyError(f"boundary in degree {d} outside 1..{len(self.ranks) - 1}")
            if len(mat) != self.ranks[d - 1] or any(len(r) != self.ranks[d] for r in mat):
                raise HomologyError(f"boundary d_{d} has the wrong shape")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, d: int) -> IntMatrix:
        if d < 1 or d > self.top:
            return zeros(self.ranks[d - 1] if 1 <= d <= self.top + 1 else 0,
                         self.ranks[d] if 0 <= d <= self.top else 0)
        return self.boundaries.get(d) or zeros(self.ranks[d - 1], self.ranks[d])

    def lowest_cell(self) -> int:
        return next((d for d, r in enumerate(self.ranks) if r), self.top + 1)

    def check(self):
        """Raise unless every composite ``d_(d-1) d_d`` vanishes."""
        for d in range(2, self.top + 1):
            lo, hi = self.boundaries.get(d - 1), self.boundaries.get(d)
            if lo is None or hi is None:
                continue
            prod = matmul(lo, hi, inner=self.ranks[d - 1])
            if any(any(row) for row in prod):
                raise HomologyError(f"not a chain complex: d_{d - 1} d_{d} != 0 ({self.name})")


@dataclass(frozen=True)
class HomologyResult:
    """Groups in degrees ``0..valid_through``; ``coeff`` is 0 for Z or a prime p.

    Over Z/p the degree-d group is stored as ``(Z/p)^dim``.
    """

    groups: tuple[FgAbelianGroup, ...]
    coeff: int = 0
    reduced: bool = False
    complete: bool = False
    name: str = ""

    @property
    def valid_through(self) -> int:
        return len(self.groups) - 1

    def group(self, d: int) -> FgAbelianGroup:
        if d < 0:
            return FgAbelianGroup()
        if d > self.valid_through:
            if self.complete:
                return FgAbelianGroup()
            raise HomologyError(
                f"degree {d} is beyond the valid range 0..{self.valid_through} of {self.name or 'this result'}"
            )
        return self.groups[d]

    __getitem__ = group

    def rank(self, d: int) -> int:
        """Free rank over Z, or dimension over Z/p."""
        g = self.group(d)
        return g.free if self.coeff == 0 else len(g.torsion)

    def truncate(self, top: int) -> HomologyResult:
        if top > self.valid_through and not self.complete:
            raise HomologyError(f"cannot extend {self.name} beyond degree {self.valid_through}")
        return HomologyResult(tuple(self.group(d) for d in range(top + 1)), self.coeff,
                              self.reduced, self.complete and top >= self.valid_through, self.name)

    def with_coefficients(self, p: int) -> HomologyResult:
        """Universal-coefficient passage from Z to Z/p."""
        if self.coeff == p:
            return self
        if self.coeff != 0:
            raise HomologyError(f"cannot change coefficients from Z/{self.coeff} to Z/{p}")
        gs = list(self.groups)
        dims = [mod_p_dimension(gs, d, p) for d in range(len(gs))]
        groups = tuple(FgAbelianGroup(0, (p,) * n) for n in dims)
        if self.complete:
            # Tor from the top integral group lands one degree up
            extra = mod_p_dimension(gs, len(gs), p)
            if extra:
                groups += (FgAbelianGroup(0, (p,) * extra),)
        return HomologyResult(groups, p, self.reduced, self.complete, self.name)

    def lowest_nonzero(self) -> int:
        """First degree that may be nonzero (``valid_through + 1`` if none in range)."""
        for d, g in enumerate(self.groups):
            if not g.is_zero:
                return d
        return self.valid_through + 1

    def table(self) -> list[str]:
        return [str(g) for g in self.groups]


def homology_of_complex(c: ChainComplex, coeff: int = 0, reduced: bool = False) -> HomologyResult:
    c.check()
    n = c.top
    known = min(c.valid_through, n)
    if coeff == 0:
        snf = {d: smith_normal_form(c.boundary(d)) for d in range(1, n + 1)}
        rk = {d: snf[d][1] for d in snf}
    else:
        rk = {d: rank_mod_p(c.boundary(d), coeff) for d in range(1, n + 1)}
    groups = []
    for d in range(known + 1):
        out_rank = rk.get(d, 0)
        in_rank = rk.get(d + 1, 0)
        free = c.ranks[d] - out_rank - in_rank
        if coeff == 0:
            tors = tuple(x for x in snf[d + 1][0] if x > 1) if d + 1 in snf else ()
            groups.append(FgAbelianGroup(free, tors))
        else:
            groups.append(FgAbelianGroup(0, (coeff,) * free))
    if reduced:
        g0 = groups[0]
        if coeff == 0:
            if g0.free < 1:
                raise HomologyError("reduced homology needs a nonempty space")
            groups[0] = FgAbelianGroup(g0.free - 1, g0.torsion)
        else:
            groups[0] = FgAbelianGroup(0, (coeff,) * (len(g0.torsion) - 1))
    complete = c.complete and known == n
    return HomologyResult(tuple(groups), coeff, reduced, complete, c.name)


# standard spaces

def cp_complex(n: Optional[int], truncation: int) -> ChainComplex:
    """``CP^n`` (``None`` for infinity): one cell in each even degree, zero boundaries."""
    top = 2 * n if n is not None else None
    return _even_cells(0, top, truncation, f"CP({'inf' if n is None else n})")


def stunted_cp_complex(n: Optional[int], m: int, truncation: int) -> ChainComplex:
    """``CP^n / CP^m``: a basepoint 0-cell plus cells in degrees ``2m+2 .. 2n``."""
    if n is not None and m >= n:
        raise HomologyError(f"stunted CP({n})/CP({m}) needs m < n")
    if m < 0:
        raise HomologyError("m must be nonnegative")
    top = 2 * n if n is not None else None
    return _even_cells(2 * m + 2, top, truncation, f"CP({'inf' if n is None else n})/CP({m})")


def _even_cells(low: int, top: Optional[int], truncation: int, name: str) -> ChainComplex:
    if truncation < 0:
        raise HomologyError("truncation must be nonnegative")
    last = truncation if top is None else top
    ranks = [0] * (last + 1)
    ranks[0] = 1
    for d in range(low, last + 1, 2):
        if d > 0:
            ranks[d] = 1
    complete = top is not None
    valid = last if complete else truncation - 1
    return ChainComplex(ranks, {}, valid, complete, name)


def rp_complex(n: Optional[int], truncation: int) -> ChainComplex:
    """``RP^n``: one cell per degree, boundary ``d_j`` is 2 for even ``j`` and 0 for odd."""
    if truncation < 0:
        raise HomologyError("truncation must be nonnegative")
    last = truncation if n is None else n
    ranks = [1] * (last + 1)
    bd = {j: [[2 if j % 2 == 0 else 0]] for j in range(1, last + 1)}
    complete = n is not None
    valid = last if complete else truncation - 1
    return ChainComplex(ranks, bd, valid, complete, f"RP({'inf' if n is None else n})")


def sphere_complex(n: int) -> ChainComplex:
    if n < 1:
        raise HomologyError("spheres S(n) need n >= 1")
    ranks = [0] * (n + 1)
    ranks[0] = ranks[n] = 1
    return ChainComplex(ranks, {}, n, True, f"S({n})")


def point_complex() -> ChainComplex:
    return ChainComplex([1], {}, 0, True, "point")


def suspension_complex(c: ChainComplex) -> ChainComplex:
    """Reduced suspension: positive-degree cells shift up one degree, basepoint kept."""
    if c.ranks[0] != 1:
        raise HomologyError("suspension is only built for complexes with a single 0-cell")
    ranks = [1, 0] + [0] * c.top
    for d in range(1, c.top + 1):
        ranks[d + 1] = c.ranks[d]
    bd = {}
    for d in range(2, c.top + 1):
        mat = c.boundaries.get(d)
        if mat is not None:
            bd[d + 1] = [[-x for x in row] for row in mat]
    return ChainComplex(ranks, bd, c.valid_through + 1, c.complete, f"susp({c.name})")


def product_complex(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Cellular complex of ``A x B``: tensor product with the Koszul sign."""
    top = a.top + b.top
    blocks: list[list[tuple[int, int]]] = []
    for n in range(top + 1):
        blocks.append([(i, n - i) for i in range(n + 1) if i <= a.top and n - i <= b.top])
    offsets: list[dict[tuple[int, int], int]] = []
    ranks = []
    for n in range(top + 1):
        off, pos = {}, 0
        for i, j in blocks[n]:
            off[(i, j)] = pos
            pos += a.ranks[i] * b.ranks[j]
        offsets.append(off)
        ranks.append(pos)
    bd = {}
    for n in range(1, top + 1):
        mat = zeros(ranks[n - 1], ranks[n])
        for i, j in blocks[n]:
            src = offsets[n][(i, j)]
            nb = b.ranks[j]
            if i >= 1 and (i - 1, j) in offsets[n - 1]:
                da = a.boundary(i)
                dst = offsets[n - 1][(i - 1, j)]
                for r in range(a.ranks[i - 1]):
                    for s in range(a.ranks[i]):
                        v = da[r][s]
                        if v:
                            for t in range(nb):
                                mat[dst + r * nb + t][src + s * nb + t] += v
            if j >= 1 and (i, j - 1) in offsets[n - 1]:
                db = b.boundary(j)
                dst = offsets[n - 1][(i, j - 1)]
                sign = -1 if i % 2 else 1
                nb0 = b.ranks[j - 1]
                for s in range(a.ranks[i]):
                    for r in range(nb0):
                        for t in range(nb):
                            v = db[r][t]
                            if v:
                                mat[dst + s * nb0 + r][src + s * nb + t] += sign * v
        bd[n] = mat
    valid = min(a.valid_through + b.lowest_cell(), b.valid_through + a.lowest_cell())
    complete = a.complete and b.complete
    if complete:
        valid = top
    return ChainComplex(ranks, bd, min(valid, top), complete, f"{a.name}x{b.name}")


_SPACE = re.compile(
    r"""^(?:
        (?P<cp>CP)\((?P<n1>\d+|inf)\)(?:/CP\((?P<m>\d+)\))? |
        RP\((?P<n2>\d+|inf)\) |
        S\((?P<n3>\d+)\) |
        (?P<pt>point) |
        susp\((?P<inner>.+)\)
    )$""",
    re.VERBOSE,
)


def standard_space_complex(name: str, truncation: int) -> ChainComplex:
    """Cellular complex for ``CP(n)``, ``RP(n)``, ``CP(n)/CP(m)``, ``S(n)``, ``point``, ``susp(X)``.

    ``n`` may be ``inf``.
    """
    m = _SPACE.match(name.replace(" ", ""))
    if not m:
        raise HomologyError(f"unknown space {name!r}")
    if m.group("inner"):
        return suspension_complex(standard_space_complex(m.group("inner"), max(truncation - 1, 0)))
    if m.group("pt"):
        return point_complex()
    if m.group("n3"):
        return sphere_complex(int(m.group("n3")))
    if m.group("n2"):
        n = m.group("n2")
        return rp_complex(None if n == "inf" else int(n), truncation)
    n = m.group("n1")
    n = None if n == "inf" else int(n)
    if m.group("m") is not None:
        return stunted_cp_complex(n, int(m.group("m")), truncation)
    return cp_complex(n, truncation)


def space_homology(name: str, truncation: int, coeff: int = 0, reduced: bool = False) -> HomologyResult:
    return homology_of_complex(standard_space_complex(name, truncation), coeff, reduced)


def smash_homology(a: HomologyResult, b: HomologyResult) -> HomologyResult:
    """Reduced Künneth formula for ``A ^ B`` from reduced homologies of the factors."""
    if not (a.reduced and b.reduced):
        raise HomologyError("smash_homology expects reduced homology on both sides")
    if a.coeff != b.coeff:
        raise HomologyError("coefficient mismatch")
    p = a.coeff
    lo_a, lo_b = a.lowest_nonzero(), b.lowest_nonzero()
    inf = 10**9
    va = inf if a.complete else a.valid_through
    vb = inf if b.complete else b.valid_through
    if a.complete and b.complete:
        top = a.valid_through + b.valid_through + 1
        complete = True
    else:
        top = min(va + lo_b, vb + lo_a)
        complete = False
    groups = []
    for n in range(top + 1):
        g = FgAbelianGroup()
        for i in range(lo_a, n - lo_b + 1):
            j = n - i
            if p == 0:
                g = g + tensor(a.group(i), b.group(j))
            else:
                dim = a.rank(i) * b.rank(j)
                g = g + FgAbelianGroup(0, (p,) * dim)
        if p == 0:
            for i in range(lo_a, n - 1 - lo_b + 1):
                g = g + tor(a.group(i), b.group(n - 1 - i))
        groups.append(g)
    return HomologyResult(tuple(groups), p, True, complete, f"({a.name})^({b.name})")


def thom_space_homology(base: HomologyResult, complex_rank: int,
                        coeff: Optional[int] = None) -> HomologyResult:
    """Reduced homology of the Thom space of a complex rank-``r`` bundle.

    Complex bundles are orientable, so this is the unreduced base homology
    shifted up by ``2r`` with any coefficients.
    """
    if complex_rank < 1:
        raise HomologyError("complex rank must be >= 1")
    if base.reduced:
        raise HomologyError("Thom isomorphism needs the unreduced base homology")
    if coeff is not None and coeff != base.coeff:
        base = base.with_coefficients(coeff)
    shift = 2 * complex_rank
    groups = (FgAbelianGroup(),) * shift + base.groups
    return HomologyResult(groups, base.coeff, True, base.complete, f"T[{complex_rank}]({base.name})")

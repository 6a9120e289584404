"""Stable stem tables, the odd-primary vanishing range for spheres, and the
low-degree Atiyah-Hirzebruch argument built on it.

Stems file lines::

    stem sphere 3 free=0 torsion=24   # provenance note
    stem cpinf 2 free=1 torsion=

The trailing comment, if any, is kept as the entry's provenance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from sympy import isprime

from .groups import FgAbelianGroup, p_part
from .homology import HomologyResult

FAMILIES = ("sphere", "cpinf")

# pi^s_j(CP^inf) for j = 2..7 as used by the fold computation
CPINF_QUOTED = {
    2: FgAbelianGroup(1),
    3: FgAbelianGroup(),
    4: FgAbelianGroup(1),
    5: FgAbelianGroup(0, (2,)),
    6: FgAbelianGroup(1),
    7: FgAbelianGroup(0, (2,)),
}


class StemsError(ValueError):
    pass


@dataclass(frozen=True)
class StemEntry:
    family: str
    j: int
    group: FgAbelianGroup
    provenance: str = ""


@dataclass
class StemTable:
    entries: dict[tuple[str, int], StemEntry] = field(default_factory=dict)
    source: str = ""

    def add(self, entry: StemEntry):
        key = (entry.family, entry.j)
        if key in self.entries:
            raise StemsError(f"duplicate stem entry {entry.family} {entry.j}")
        self.entries[key] = entry

    def get(self, family: str, j: int) -> Optional[FgAbelianGroup]:
        e = self.entries.get((family, j))
        return None if e is None else e.group

    def require(self, family: str, j: int) -> FgAbelianGroup:
        g = self.get(family, j)
        if g is None:
            raise StemsError(f"stems table {self.source or ''} has no entry for {family} j={j}")
        return g

    def degrees(self, family: str) -> list[int]:
        return sorted(j for f, j in self.entries if f == family)


def parse_stems(lines: Iterable[str], source: str = "<stems>") -> StemTable:
    table = StemTable(source=source)
    for lineno, raw in enumerate(lines, start=1):
        line, _, note = raw.partition("#")
        line = line.strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        toks = line.split()
        if len(toks) != 5 or toks[0] != "stem":
            raise StemsError(f"{where}: expected 'stem <family> <j> free=<r> torsion=<d1,...>'")
        _, family, j, free, torsion = toks
        if family not in FAMILIES:
            raise StemsError(f"{where}: family must be one of {FAMILIES}, got {family!r}")
        if not free.startswith("free=") or not torsion.startswith("torsion="):
            raise StemsError(f"{where}: expected free=<r> torsion=<d1,...>")
        try:
            jj = int(j)
            r = int(free[5:])
            ds = tuple(int(x) for x in torsion[8:].split(",") if x)
            group = FgAbelianGroup(r, ds)
        except ValueError as exc:
            raise StemsError(f"{where}: {exc}") from None
        if jj < 0:
            raise StemsError(f"{where}: negative degree")
        table.add(StemEntry(family, jj, group, note.strip()))
    return table


def load_stems(path=None) -> StemTable:
    """Read a stems file; ``None`` loads the bundled copy."""
    if path is None:
        text = resources.files("qhol.data").joinpath("stems.txt").read_text(encoding="utf-8")
        return parse_stems(text.splitlines(), source="stems.txt")
    path = Path(path)
    return parse_stems(path.read_text(encoding="utf-8").splitlines(), source=path.name)


class Serre(enum.Enum):
    FREE = "Z, no p-torsion"
    TRIVIAL = "trivial"
    CYCLIC_P = "Z/p"
    UNKNOWN = "unknown"


def serre_p_part(j: int, p: int) -> Serre:
    """What Serre's theorem fixes about the p-primary part of pi^s(j), p odd."""
    if p < 3 or not isprime(p):
        raise StemsError(f"p must be an odd prime, got {p}")
    if j < 0:
        raise StemsError("negative stem")
    if j == 0:
        return Serre.FREE
    if j < 2 * p - 3:
        return Serre.TRIVIAL
    if j == 2 * p - 3:
        return Serre.CYCLIC_P
    return Serre.UNKNOWN


@dataclass
class ValidationReport:
    checked: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_stem_table(t: StemTable, primes: Iterable[int] = (3, 5, 7, 11, 13)) -> ValidationReport:
    """Check sphere entries against the Serre range and CP^inf entries against the quoted values."""
    rep = ValidationReport()
    primes = list(primes)
    for j in t.degrees("sphere"):
        g = t.require("sphere", j)
        if j > 0 and g.free:
            rep.violations.append(f"sphere j={j}: stable stem {g} must be finite")
        for p in primes:
            verdict = serre_p_part(j, p)
            pp = p_part(g, p)
            if verdict is Serre.UNKNOWN:
                continue
            expected = {
                Serre.FREE: FgAbelianGroup(),
                Serre.TRIVIAL: FgAbelianGroup(),
                Serre.CYCLIC_P: FgAbelianGroup(0, (p,)),
            }[verdict]
            if verdict is Serre.FREE and g.free != 1:
                rep.violations.append(f"sphere j=0: expected Z, got {g}")
            if pp != expected:
                rep.violations.append(
                    f"sphere j={j}: {p}-part is {pp}, Serre forces {expected} ({verdict.value})"
                )
            else:
                rep.checked.append(f"sphere j={j} p={p}: {p}-part {pp} ({verdict.value})")
    for j, want in CPINF_QUOTED.items():
        got = t.get("cpinf", j)
        if got is None:
            rep.violations.append(f"cpinf j={j}: missing (quoted value {want})")
        elif got != want:
            rep.violations.append(f"cpinf j={j}: table has {got}, quoted value is {want}")
        else:
            rep.checked.append(f"cpinf j={j}: {got}")
    return rep


@dataclass(frozen=True)
class E2Entry:
    i: int
    j: int
    coefficients: str
    p_torsion: FgAbelianGroup
    vanishes: bool


@dataclass
class AhssReport:
    n: int
    p: int
    total_degree: int
    in_serre_range: bool
    entries: list[E2Entry]

    @property
    def vanishes(self) -> bool:
        return self.in_serre_range and all(e.vanishes for e in self.entries)

    def __bool__(self):
        return self.vanishes


def ahss_table(reduced_homology: HomologyResult, n: int, p: int) -> AhssReport:
    """``E^2_{i,j} = H_i(X; pi^s(j))`` localized at ``p`` along ``i + j = n + 2``.

    The input must be integral reduced homology of a p-local model of the
    space (2-primary factors already dropped by the caller).
    """
    if not reduced_homology.reduced or reduced_homology.coeff != 0:
        raise StemsError("AHSS input must be integral reduced homology")
    total = n + 2
    in_range = total < 2 * p - 3
    entries = []
    for i in range(total + 1):
        j = total - i
        verdict = serre_p_part(j, p)
        h = reduced_homology.group(i)
        if verdict is Serre.FREE:
            tors = p_part(h, p)
            entries.append(E2Entry(i, j, "Z_(p)", tors, tors.is_zero))
        elif verdict is Serre.TRIVIAL:
            entries.append(E2Entry(i, j, "0", FgAbelianGroup(), True))
        else:
            # pi^s(j) may carry p-torsion here: only a vanishing H_i and H_(i-1) is conclusive
            below = reduced_homology.group(i - 1)
            zero = h.is_zero and below.is_zero
            entries.append(E2Entry(i, j, verdict.value, FgAbelianGroup(), zero))
    return AhssReport(n, p, total, in_range, entries)


def ahss_vanishing(reduced_homology: HomologyResult, n: int, p: int) -> bool:
    """True iff the p-torsion of pi^s_(n+2) is provably trivial inside the Serre range."""
    return ahss_table(reduced_homology, n, p).vanishes

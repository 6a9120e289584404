"""Headline computations: rational ranks, the Morin formula check, the fold
exact sequence, torsion-free primes, the Thom space homology comparison and
branch loci of covers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from sympy import primerange

from .char_ring import (
    RingElement,
    RingPresentation,
    fold_thom_polynomial,
    inverse_total_class,
    line_bundle_chern,
    pair_fundamental,
    projective_product_ring,
    projective_ring,
    sw_from_chern,
    tp_evaluate,
)
from .exact_sequence import Arrow, ExactSequence, GroupTerm, SolveResult, solve_exact_sequence
from .groups import FgAbelianGroup
from .homology import (
    HomologyResult,
    homology_of_complex,
    product_complex,
    smash_homology,
    space_homology,
    standard_space_complex,
    thom_space_homology,
)
from .registry import (
    FOLD_BUNDLE_K1,
    Registry,
    SingularityClass,
    builtin_singularity,
    morin_index,
    morin_set,
    poincare_series_of_group,
)
from .series import partition_count
from .stems import AhssReport, StemTable, ahss_table, load_stems


class CobordismError(ValueError):
    pass


# rational ranks

@dataclass(frozen=True)
class RankQuery:
    sigma: tuple[SingularityClass, ...]
    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise CobordismError("n and k must be nonnegative")
        object.__setattr__(self, "sigma", tuple(self.sigma))
        names = [s.name for s in self.sigma]
        if len(set(names)) != len(names):
            raise CobordismError(f"repeated singularity in {names}")


def downward_closure_gaps(sigma: Sequence[SingularityClass], k: int,
                          registry: Optional[Registry] = None) -> list[str]:
    """Registered classes of smaller codimension than some member of ``sigma`` but missing from it."""
    if not sigma:
        return []
    top = max(s.codim for s in sigma)
    have = {s.name for s in sigma}
    gaps = []
    i = 0
    while (s := builtin_singularity("Sigma0" if i == 0 else f"A{i}", k)).codim < top:
        if s.name not in have:
            gaps.append(s.name)
        i += 1
    if registry is not None:
        gaps += [s.name for s in registry.user_classes(k) if s.codim < top and s.name not in have]
    return gaps


def rank_contributions(q: RankQuery) -> list[tuple[str, int, int]]:
    """``(name, degree n - 2c, rank of H_degree(BG; Q))`` per singularity."""
    out = []
    for s in q.sigma:
        if s.group is None:
            raise CobordismError(f"{s.name} has no symmetry group presentation")
        d = q.n - 2 * s.codim
        r = poincare_series_of_group(s.group, d)[d] if d >= 0 else 0
        out.append((s.name, d, r))
    return out


def rational_rank(q: RankQuery, registry: Optional[Registry] = None) -> int:
    """Rank of the cobordism group tensored with Q: sum over the singularities of
    ``dim H_{n - 2 c_eta}(B G_eta; Q)``."""
    gaps = downward_closure_gaps(q.sigma, q.k, registry)
    if gaps:
        warnings.warn(f"singularity set is not downward closed; missing {gaps}", stacklevel=2)
    return sum(r for _, _, r in rank_contributions(q))


def _pk(k: int, m: int) -> int:
    if m < 0:
        return 0
    if k == 0:
        return 1 if m == 0 else 0
    return partition_count(k, m)


def morin_rank_closed_form(n: int, k: int, r: int) -> int:
    """The printed Morin formula, evaluated literally:
    ``p_k(n/2) + sum_{i=1..r} sum_{j=0..n/2 - i(k+1)} p_k(n/2 - j)``."""
    if n < 0 or k < 0 or r < 0:
        raise CobordismError("n, k, r must be nonnegative")
    if n % 2:
        return 0
    h = n // 2
    total = _pk(k, h)
    for i in range(1, r + 1):
        for j in range(0, h - i * (k + 1) + 1):
            total += _pk(k, h - j)
    return total


@dataclass(frozen=True)
class MorinCheck:
    n: int
    k: int
    r: int
    closed_form: int
    sum_over_eta: int

    @property
    def status(self) -> str:
        return "agree" if self.closed_form == self.sum_over_eta else "mismatch"

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "r": self.r, "status": self.status,
                "closed_form": self.closed_form, "sum_over_eta": self.sum_over_eta}


def morin_crosscheck(n: int, k: int, r: int) -> MorinCheck:
    q = RankQuery(tuple(morin_set(r, k)), n, k)
    return MorinCheck(n, k, r, morin_rank_closed_form(n, k, r), rational_rank(q))


# fold maps of codimension 2

FOLD_BUNDLE_RANK = len(FOLD_BUNDLE_K1)  # complex rank of the target bundle of A1


def fold_bundle_w2() -> RingElement:
    """``w_2`` of the target bundle of the fold over ``CP^inf x CP^inf``."""
    base = projective_product_ring(2, cap=4)
    w = sw_from_chern(line_bundle_chern(FOLD_BUNDLE_K1, base))
    return w.component(2)


@lru_cache(maxsize=None)
def _fold_thom_homology(top: int) -> HomologyResult:
    base = homology_of_complex(product_complex(standard_space_complex("CP(inf)", top),
                                               standard_space_complex("CP(inf)", top)))
    return thom_space_homology(base, FOLD_BUNDLE_RANK)


def thom_space_stable_homotopy(m: int) -> tuple[GroupTerm, str]:
    """What is known about ``pi^s_m`` of the fold's Thom space, with the reason."""
    name = f"pi^s_{m}(T)"
    connectivity = 2 * FOLD_BUNDLE_RANK - 1
    if m <= connectivity:
        return GroupTerm.known(name, FgAbelianGroup()), (
            f"Thom space of a real rank-{2 * FOLD_BUNDLE_RANK} bundle is {connectivity}-connected")
    if m == connectivity + 1:
        h = _fold_thom_homology(m + 2).group(m)
        return GroupTerm.known(name, FgAbelianGroup(1)), (
            f"orientable {2 * FOLD_BUNDLE_RANK}-bundle over a simply connected base; "
            f"stable Hurewicz gives H_{m} = {h}")
    if m == connectivity + 2:
        w2 = fold_bundle_w2()
        if not w2:
            raise CobordismError("w_2 vanished; the pi^s_7 fact does not apply")
        return GroupTerm.known(name, FgAbelianGroup()), f"w_2 = {w2} (mod 2) is nonzero"
    rank = _fold_thom_homology(m + 2).rank(m)
    return GroupTerm.unknown(name, rank=rank), f"rank from rational Hurewicz: dim H_{m}(T; Q) = {rank}"


# the boundary pi^s_6(T) -> pi^s_5(CP^inf) is nontrivial (link of the fold)
BOUNDARY_NONTRIVIAL_DEGREE = 6


@dataclass
class FoldAnalysis:
    n: int
    sequence: ExactSequence
    solved: SolveResult
    facts: list[str]
    torsion: Optional[TorsionPrimes] = None

    @property
    def qhol(self) -> GroupTerm:
        return self.solved.term(qhol_name(self.n))

    @property
    def rational_rank(self) -> Optional[int]:
        return self.qhol.rational_rank()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "qhol": self.qhol.to_json(),
            "sequence": [t.to_json() for t in self.solved.terms],
            "facts": self.facts,
            "trace": [s.to_json() for s in self.solved.trace],
            "torsion_free_primes": None if self.torsion is None else self.torsion.certified,
        }


def qhol_name(n: int) -> str:
    return f"Qhol({n},1)"


def fold_cobordism_analysis(n: int, stems: Optional[StemTable] = None,
                            p_max: Optional[int] = None) -> FoldAnalysis:
    """Assemble the long exact sequence of the key fibration through degree
    ``n + 3`` and solve it."""
    if not 0 <= n <= 5:
        raise CobordismError("the fold analysis covers n = 0..5")
    stems = stems or load_stems()
    facts = []
    terms: list[GroupTerm] = []
    arrows: list[Arrow] = []

    def push(term: GroupTerm, arrow: Optional[Arrow] = None):
        if terms:
            arrows.append(arrow or Arrow())
        terms.append(term)

    top, why = thom_space_stable_homotopy(n + 3)
    facts.append(f"{top.name} = {top}: {why}")
    push(top)
    for d in range(n + 2, 1, -1):
        cp = GroupTerm.known(f"pi^s_{d}(CP^inf)", stems.require("cpinf", d))
        facts.append(f"{cp.name} = {cp} (stems table)")
        boundary = Arrow(nontrivial=True, label="boundary") if d + 1 == BOUNDARY_NONTRIVIAL_DEGREE else Arrow()
        push(cp, boundary)
        push(GroupTerm.unknown(qhol_name(d - 2)))
        t, why = thom_space_stable_homotopy(d)
        facts.append(f"{t.name} = {t}: {why}")
        push(t)
    if n + 3 >= BOUNDARY_NONTRIVIAL_DEGREE:
        facts.append("boundary pi^s_6(T) -> pi^s_5(CP^inf) is nontrivial (link of the fold is not null-cobordant)")
    bottom = GroupTerm.known("pi^s_1(CP^inf)", stems.require("cpinf", 1))
    push(bottom)
    seq = ExactSequence(terms, arrows)
    solved = solve_exact_sequence(seq)
    torsion = fold_torsion_primes(n, p_max) if p_max else None
    return FoldAnalysis(n, seq, solved, facts, torsion)


def fold_table(n_max: int = 5, stems: Optional[StemTable] = None) -> list[FoldAnalysis]:
    return [fold_cobordism_analysis(n, stems) for n in range(n_max + 1)]


@lru_cache(maxsize=None)
def fold_space_plocal_homology(top: int) -> HomologyResult:
    """Reduced homology of ``CP^inf ^ CP^inf/CP^1``, the p-local model of the
    fold's Thom space for odd p, valid at least through ``top``."""
    a = space_homology("CP(inf)", top + 2, reduced=True)
    b = space_homology("CP(inf)/CP(1)", top + 2, reduced=True)
    return smash_homology(a, b)


@dataclass
class TorsionPrimes:
    n: int
    p_max: int
    certified: list[int]
    reports: dict[int, AhssReport] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p_max": self.p_max,
            "certified": self.certified,
            "checked": [
                {"p": p, "certified": r.vanishes, "in_serre_range": r.in_serre_range,
                 "nonzero_entries": [[e.i, e.j, e.coefficients] for e in r.entries if e.coefficients != "0"]}
                for p, r in sorted(self.reports.items())
            ],
        }


def fold_torsion_primes(n: int, p_max: Optional[int] = None) -> TorsionPrimes:
    """Odd primes ``p <= p_max`` for which the AHSS shows the p-torsion of the
    fold cobordism group in dimension ``n`` vanishes."""
    if n < 0:
        raise CobordismError("n must be nonnegative")
    if p_max is None:
        p_max = n + 10
    h = fold_space_plocal_homology(n + 2)
    reports = {p: ahss_table(h, n, p) for p in primerange(3, p_max + 1)}
    return TorsionPrimes(n, p_max, [p for p, r in reports.items() if r.vanishes], reports)


# Thom space of the fold bundle, two ways

@dataclass
class TxiComparison:
    max_degree: int
    rows: list[dict]

    @property
    def all_equal(self) -> bool:
        return all(r["equal"] for r in self.rows)

    def to_json(self) -> dict:
        return {"max_degree": self.max_degree, "all_equal": self.all_equal, "rows": self.rows}


def txi_thom_leg(max_degree: int, coeff: int) -> HomologyResult:
    """Thom isomorphism leg: cellular product ``CP^inf x CP^inf``, shifted by the bundle rank."""
    top = max_degree + 2
    prod = product_complex(standard_space_complex("CP(inf)", top), standard_space_complex("CP(inf)", top))
    return thom_space_homology(homology_of_complex(prod, coeff), FOLD_BUNDLE_RANK)


def txi_smash_leg(max_degree: int, coeff: int) -> HomologyResult:
    """Smash leg: ``T(g^2) = CP^inf/RP^inf`` (shift of ``CP^inf``) smashed with ``CP^inf/CP^1``."""
    top = max_degree + 2
    cp = homology_of_complex(standard_space_complex("CP(inf)", top), coeff)
    first = thom_space_homology(cp, 1)
    second = homology_of_complex(standard_space_complex("CP(inf)/CP(1)", top), coeff, reduced=True)
    return smash_homology(first, second)


def verify_prop_txi(max_degree: int) -> TxiComparison:
    if max_degree < 6:
        raise CobordismError("max_degree must be at least 6")
    rows = []
    for coeff in (0, 2):
        a = txi_thom_leg(max_degree, coeff)
        b = txi_smash_leg(max_degree, coeff)
        label = "Z" if coeff == 0 else f"Z/{coeff}"
        for d in range(max_degree + 1):
            ga, gb = a.group(d), b.group(d)
            rows.append({"degree": d, "coeff": label, "thom": str(ga), "smash": str(gb), "equal": ga == gb})
    return TxiComparison(max_degree, rows)


# branch loci of covers

def normal_chern_class(cM: RingElement, cP: RingElement,
                       pullback: Mapping[str, RingElement]) -> RingElement:
    """Total class ``f^* c(TP) c(TM)^-1`` of the stable normal bundle."""
    M = cM.presentation
    for g, img in pullback.items():
        if img.presentation != M:
            raise CobordismError(f"pullback of {g} does not live in the source cohomology")
    try:
        pulled = cP.substitute(pullback, M)
    except ValueError as exc:
        raise CobordismError(str(exc)) from None
    return pulled * inverse_total_class(cM)


def branch_locus_class(cM: RingElement, cP: RingElement,
                       pullback: Mapping[str, RingElement]) -> RingElement:
    """Class of the branch locus of a double cover: the fold Thom polynomial
    (codimension 0, so ``c_1``) of the normal bundle."""
    nu = normal_chern_class(cM, cP, pullback)
    return tp_evaluate(fold_thom_polynomial(0), [nu.component(2)])


@dataclass(frozen=True)
class BranchPreset:
    name: str
    description: str
    cM: RingElement
    cP: RingElement
    pullback: dict
    fundamental: tuple[int, ...]
    expected_branch_points: int


def _cp1_cover(name: str, degree: int, description: str, expected: int) -> BranchPreset:
    ring = projective_ring(1, cap=2)
    x = ring.gen("x")
    c = (1 + x) ** 2  # c(T CP^1) = (1 + x)^2
    return BranchPreset(name, description, c, c, {"x": x * degree}, (1,), expected)


def _torus_cover(r: int) -> BranchPreset:
    # only H^2 matters for c_1; tangent bundle of a torus is trivial
    ring = RingPresentation(("x",), (2,), 2, (2,))
    x = ring.gen("x")
    return BranchPreset(f"torus-cover-{r}", f"unbranched {r}-sheeted cover of a torus by a torus",
                        ring.one(), ring.one(), {"x": x * r}, (1,), 0)


BRANCH_PRESETS = {
    p.name: p
    for p in (
        _cp1_cover("double-cover-cp1", 2, "z -> z^2 on CP^1", 2),
        _cp1_cover("identity-cp1", 1, "identity of CP^1", 0),
        _torus_cover(3),
    )
}


def branch_preset_result(name: str) -> dict:
    try:
        p = BRANCH_PRESETS[name]
    except KeyError:
        raise CobordismError(f"unknown preset {name!r}; choose from {sorted(BRANCH_PRESETS)}") from None
    cls = branch_locus_class(p.cM, p.cP, p.pullback)
    return {
        "preset": p.name,
        "description": p.description,
        "c_TM": str(p.cM),
        "c_TP": str(p.cP),
        "pullback": {g: str(v) for g, v in sorted(p.pullback.items())},
        "branch_class": str(cls),
        "pairing": pair_fundamental(cls, p.fundamental),
        "expected_branch_points": p.expected_branch_points,
    }


__all__ = [
    "RankQuery", "rational_rank", "rank_contributions", "morin_rank_closed_form", "morin_crosscheck",
    "MorinCheck", "fold_cobordism_analysis", "fold_table", "FoldAnalysis", "fold_torsion_primes",
    "TorsionPrimes", "verify_prop_txi", "branch_locus_class", "normal_chern_class", "fold_bundle_w2",
    "BRANCH_PRESETS", "morin_index",
]

"""Singularity classes, their symmetry groups, and the registry config format.

Config lines look like::

    # comment
    singularity cusp codim=4 group=U(1)xU(1)
    singularity tri codim=6 group=U(1) wreath=3 k=1

``k=`` is optional; an entry without it answers for every codimension ``k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .series import TruncatedSeries, geometric, symmetric_power_series


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class GroupFactor:
    """``Sym_w`` acting on ``(U(m_1) x ... x U(m_s))**w``."""

    unitary: tuple[int, ...]
    wreath: int = 1

    def __post_init__(self):
        if any(m < 1 for m in self.unitary):
            raise RegistryError(f"unitary sizes must be >= 1: {self.unitary}")
        if self.wreath < 1:
            raise RegistryError(f"wreath multiplicity must be >= 1: {self.wreath}")

    def __str__(self):
        body = "x".join(f"U({m})" for m in self.unitary) or "1"
        return body if self.wreath == 1 else f"Sym{self.wreath}|({body})^{self.wreath}"


@dataclass(frozen=True)
class GroupPresentation:
    factors: tuple[GroupFactor, ...] = ()

    @classmethod
    def unitary(cls, *sizes: int) -> GroupPresentation:
        """Product of unitary groups; ``U(0)`` factors are dropped (trivial group)."""
        sizes = tuple(m for m in sizes if m)
        return cls((GroupFactor(sizes),) if sizes else ())

    def __str__(self):
        return " x ".join(str(f) for f in self.factors) or "1"


def bu_series(m: int, cap: int) -> TruncatedSeries:
    """Poincaré series of ``BU(m)``: ``prod_{i<=m} 1/(1 - t**(2i))``."""
    s = TruncatedSeries.one(cap)
    for i in range(1, m + 1):
        s = s * geometric(2 * i, cap)
    return s


def poincare_series_of_group(g: GroupPresentation, cap: int) -> TruncatedSeries:
    """Rational Poincaré series of ``BG`` in real degree, through ``cap``."""
    if cap < 0:
        raise RegistryError("cap must be nonnegative")
    out = TruncatedSeries.one(cap)
    for f in g.factors:
        s = TruncatedSeries.one(cap)
        for m in f.unitary:
            s = s * bu_series(m, cap)
        if f.wreath > 1:
            s = symmetric_power_series(s, f.wreath)
        out = out * s
    return out


@dataclass(frozen=True)
class SingularityClass:
    name: str
    k: int
    codim: int
    group: GroupPresentation
    # summands (alpha, beta, ...) of the target bundle over (CP^inf)^r
    bundle: Optional[tuple[tuple[int, ...], ...]] = None
    source: str = "builtin"

    def __post_init__(self):
        if self.codim < 0:
            raise RegistryError(f"{self.name}: negative codimension {self.codim}")
        if self.k < 0:
            raise RegistryError(f"{self.name}: negative k {self.k}")

    @property
    def bundle_rank(self) -> Optional[int]:
        return None if self.bundle is None else len(self.bundle)


@dataclass(frozen=True)
class MultisingularitySpec:
    parts: tuple[tuple[SingularityClass, int], ...]

    def __post_init__(self):
        if any(m < 1 for _, m in self.parts):
            raise RegistryError("multiplicities must be >= 1")

    def __str__(self):
        return " + ".join(f"{m}[{s.name}]" for s, m in self.parts)


# target bundle of the fold for k=1: pr1*g^2 + pr2*g + pr1*g^v (x) pr2*g
FOLD_BUNDLE_K1 = ((2, 0), (0, 1), (-1, 1))

_MORIN = re.compile(r"A([1-9][0-9]*)$")


def morin_index(name: str) -> Optional[int]:
    """0 for ``Sigma0``, ``i`` for ``A<i>``, ``None`` otherwise."""
    if name == "Sigma0":
        return 0
    m = _MORIN.match(name)
    return int(m.group(1)) if m else None


def builtin_singularity(name: str, k: int) -> SingularityClass:
    """Sigma0 and the Morin series ``A_i`` for codimension-``k`` maps."""
    if k < 0:
        raise RegistryError(f"k must be nonnegative, got {k}")
    i = morin_index(name)
    if i is None:
        raise RegistryError(f"unknown singularity {name!r}; builtins are Sigma0, A1, A2, ...")
    if i == 0:
        return SingularityClass("Sigma0", k, 0, GroupPresentation.unitary(k))
    bundle = FOLD_BUNDLE_K1 if (i == 1 and k == 1) else None
    return SingularityClass(name, k, i * (k + 1), GroupPresentation.unitary(1, k), bundle)


def is_builtin_name(name: str) -> bool:
    return morin_index(name) is not None


@dataclass
class Registry:
    """Builtins plus user entries keyed by ``(name, k)``; ``k=None`` matches any k."""

    user: dict[tuple[str, Optional[int]], _UserEntry] = field(default_factory=dict)

    def add(self, name: str, codim: int, group: GroupPresentation, k: Optional[int] = None,
            source: str = "user"):
        if is_builtin_name(name):
            raise RegistryError(f"{name!r} redefines a builtin singularity")
        if (name, k) in self.user:
            raise RegistryError(f"duplicate singularity {name!r}" + (f" for k={k}" if k is not None else ""))
        if codim < 0:
            raise RegistryError(f"{name}: negative codimension {codim}")
        self.user[(name, k)] = _UserEntry(name, k, codim, group, source)

    def lookup(self, name: str, k: int) -> SingularityClass:
        if is_builtin_name(name):
            return builtin_singularity(name, k)
        entry = self.user.get((name, k)) or self.user.get((name, None))
        if entry is None:
            raise RegistryError(f"unknown singularity {name!r} for k={k}")
        return entry.at(k)

    def user_classes(self, k: int) -> list[SingularityClass]:
        names = sorted({n for n, kk in self.user if kk is None or kk == k})
        return [self.lookup(n, k) for n in names]

    def names(self) -> list[str]:
        return sorted({n for n, _ in self.user})


@dataclass(frozen=True)
class _UserEntry:
    name: str
    k: Optional[int]
    codim: int
    group: GroupPresentation
    source: str

    def at(self, k: int) -> SingularityClass:
        return SingularityClass(self.name, k, self.codim, self.group, source=self.source)


_GROUP = re.compile(r"U\((\d+)\)")


def parse_group(text: str, wreath: int = 1) -> GroupPresentation:
    """``"U(1)xU(2)"`` -> presentation; ``"1"`` is the trivial group."""
    if text == "1":
        sizes: list[int] = []
    else:
        sizes = []
        for part in text.split("x"):
            m = _GROUP.fullmatch(part.strip())
            if not m:
                raise RegistryError(f"malformed group factor {part!r}")
            sizes.append(int(m.group(1)))
        if any(s < 1 for s in sizes):
            raise RegistryError(f"group factors need U(m) with m >= 1: {text}")
    if not sizes:
        if wreath != 1:
            raise RegistryError("wreath of the trivial group")
        return GroupPresentation()
    return GroupPresentation((GroupFactor(tuple(sizes), wreath),))


def parse_registry(lines: Iterable[str], source: str = "<config>") -> Registry:
    reg = Registry()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        toks = line.split()
        if toks[0] != "singularity" or len(toks) < 2:
            raise RegistryError(f"{where}: expected 'singularity <name> codim=<int> group=...'")
        name = toks[1]
        opts = {}
        for tok in toks[2:]:
            key, eq, val = tok.partition("=")
            if not eq or key not in ("codim", "group", "wreath", "k"):
                raise RegistryError(f"{where}: unexpected token {tok!r}")
            if key in opts:
                raise RegistryError(f"{where}: {key} given twice")
            opts[key] = val
        for key in ("codim", "group"):
            if key not in opts:
                raise RegistryError(f"{where}: missing {key}=")
        try:
            codim = int(opts["codim"])
            wreath = int(opts.get("wreath", 1))
            k = int(opts["k"]) if "k" in opts else None
        except ValueError as exc:
            raise RegistryError(f"{where}: {exc}") from None
        if codim < 0:
            raise RegistryError(f"{where}: negative codimension {codim}")
        if k is not None and k < 0:
            raise RegistryError(f"{where}: negative k {k}")
        try:
            group = parse_group(opts["group"], wreath)
            reg.add(name, codim, group, k, source=where)
        except RegistryError as exc:
            raise RegistryError(f"{where}: {exc}") from None
    return reg


def load_registry_config(path) -> Registry:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_registry(fh, source=path.name)


def morin_set(r: int, k: int) -> list[SingularityClass]:
    """``{Sigma0, A_1, ..., A_r}``."""
    return [builtin_singularity("Sigma0", k)] + [builtin_singularity(f"A{i}", k) for i in range(1, r + 1)]


def resolve_sigma(names: Sequence[str], k: int, registry: Optional[Registry] = None) -> list[SingularityClass]:
    registry = registry or Registry()
    seen = set()
    out = []
    for n in names:
        if n in seen:
            raise RegistryError(f"{n!r} listed twice")
        seen.add(n)
        out.append(registry.lookup(n, k))
    return out

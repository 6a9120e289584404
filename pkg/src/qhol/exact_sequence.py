"""Rule-based deductions on exact sequences of finitely generated abelian groups.

The sequence ``G_0 -f_0-> G_1 -f_1-> ... -> G_{N-1}`` is split into short
exact pieces ``0 -> I_{a-1} -> G_a -> I_a -> 0`` where ``I_a = im f_a``.
Exactness is only assumed at interior terms; an end term that is not the
zero group leaves the sequence open there.

Rules, applied in a fixed order until nothing changes:

* R0  annotations and zero terms translate into facts about images
* R1  a term between two zero maps is 0; ``0 -> A -> B -> 0`` forces ``A = B``
* R2  ``0 -> A -> B -> C -> 0`` with ``A``, ``C`` free forces ``B = A + C``
* R3  a surjection out of a known finite group: target is one of its quotients
* R4  rational ranks are additive on each short exact piece; every window
      bounded by zero terms has alternating rank sum zero
* R5  a nontrivial map from a known cyclic group into ``Z/2`` is onto
* R6  a subgroup of a free group is free (rank from R4)
* R7  order bookkeeping for finite terms (``|B| = |A| |C|``; quotients of cyclic groups)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .groups import FgAbelianGroup, quotient_types


class Contradiction(ValueError):
    """Inconsistent data; ``window`` is the (first, last) term index range involved."""

    def __init__(self, message: str, window: tuple[int, int]):
        super().__init__(f"{message} (terms {window[0]}..{window[1]})")
        self.window = window


@dataclass(frozen=True)
class GroupTerm:
    """A known group, a named unknown, or a finite candidate set."""

    name: str
    group: Optional[FgAbelianGroup] = None
    candidates: Optional[tuple[FgAbelianGroup, ...]] = None
    rank: Optional[int] = None  # known rational rank of an otherwise unknown term

    def __post_init__(self):
        if self.candidates is not None:
            if not self.candidates:
                raise ValueError(f"{self.name}: empty candidate set")
            object.__setattr__(self, "candidates", tuple(sorted(set(self.candidates))))

    @classmethod
    def known(cls, name: str, group: FgAbelianGroup) -> GroupTerm:
        return cls(name, group=group)

    @classmethod
    def unknown(cls, name: str, rank: Optional[int] = None) -> GroupTerm:
        return cls(name, rank=rank)

    @property
    def kind(self) -> str:
        if self.group is not None:
            return "known"
        if self.candidates is not None:
            return "candidates"
        return "unknown"

    @property
    def is_zero(self) -> bool:
        return self.group is not None and self.group.is_zero

    def rational_rank(self) -> Optional[int]:
        if self.group is not None:
            return self.group.free
        if self.candidates is not None:
            ranks = {c.free for c in self.candidates}
            if len(ranks) == 1:
                return ranks.pop()
        return self.rank

    def __str__(self):
        if self.group is not None:
            return str(self.group)
        if self.candidates is not None:
            return " or ".join(str(c) for c in self.candidates)
        return f"?{self.name}" + (f" (rank {self.rank})" if self.rank is not None else "")

    def to_json(self) -> dict:
        d: dict = {"name": self.name, "kind": self.kind}
        if self.group is not None:
            d["group"] = self.group.to_json()
        if self.candidates is not None:
            d["candidates"] = [c.to_json() for c in self.candidates]
        r = self.rational_rank()
        d["rational_rank"] = r
        d["text"] = str(self)
        return d


@dataclass(frozen=True)
class Arrow:
    zero: bool = False
    injective: bool = False
    surjective: bool = False
    nontrivial: bool = False
    image_rank: Optional[int] = None
    label: str = ""


@dataclass
class ExactSequence:
    terms: list[GroupTerm]
    arrows: list[Arrow] = field(default_factory=list)

    def __post_init__(self):
        if not self.arrows:
            self.arrows = [Arrow() for _ in range(len(self.terms) - 1)]
        if len(self.arrows) != len(self.terms) - 1:
            raise ValueError("need exactly one arrow between consecutive terms")

    @property
    def bounded(self) -> bool:
        return bool(self.terms) and self.terms[0].is_zero and self.terms[-1].is_zero

    def index(self, name: str) -> int:
        for i, t in enumerate(self.terms):
            if t.name == name:
                return i
        raise KeyError(name)

    def __str__(self):
        parts = [str(self.terms[0])]
        for a, t in zip(self.arrows, self.terms[1:]):
            parts.append(f"-{a.label}->" if a.label else "->")
            parts.append(str(t))
        return " ".join(parts)


@dataclass(frozen=True)
class Step:
    rule: str
    target: str
    value: str
    reason: str

    def to_json(self) -> dict:
        return {"rule": self.rule, "target": self.target, "value": self.value, "reason": self.reason}


class _Slot:
    """Mutable knowledge about one group (a term or an image)."""

    def __init__(self, label: str, window: tuple[int, int],
                 group=None, candidates=None, rank=None):
        self.label = label
        self.window = window
        self.group: Optional[FgAbelianGroup] = None
        self.candidates: Optional[frozenset] = None
        self.rank: Optional[int] = None
        self.refine(group=group, candidates=candidates, rank=rank)

    def _fail(self, msg):
        raise Contradiction(f"{self.label}: {msg}", self.window)

    def refine(self, group=None, candidates=None, rank=None) -> bool:
        changed = False
        if group is not None:
            if self.group is not None:
                if self.group != group:
                    self._fail(f"deduced {group} but it is {self.group}")
            else:
                if self.candidates is not None and group not in self.candidates:
                    self._fail(f"deduced {group}, not among {sorted(map(str, self.candidates))}")
                if self.rank is not None and self.rank != group.free:
                    self._fail(f"deduced {group} but its rank is {self.rank}")
                self.group = group
                self.candidates = None
                self.rank = group.free
                changed = True
        if candidates is not None and self.group is None:
            cs = frozenset(candidates)
            if self.rank is not None:
                cs = frozenset(c for c in cs if c.free == self.rank)
            new = cs if self.candidates is None else self.candidates & cs
            if not new:
                self._fail("no candidate survives")
            if new != self.candidates:
                self.candidates = new
                changed = True
            if len(new) == 1:
                (only,) = new
                self.candidates = None
                self.refine(group=only)
                return True
            ranks = {c.free for c in new}
            if len(ranks) == 1 and self.rank is None:
                self.rank = ranks.pop()
        elif candidates is not None and self.group not in set(candidates):
            self._fail(f"{self.group} is not among {sorted(map(str, candidates))}")
        if rank is not None:
            if self.rank is not None and self.rank != rank:
                self._fail(f"rank {rank} conflicts with rank {self.rank}")
            if self.rank is None:
                self.rank = rank
                changed = True
                if self.candidates is not None:
                    return self.refine(candidates=self.candidates) or True
        return changed

    def copy_from(self, other: _Slot) -> bool:
        return self.refine(group=other.group, candidates=other.candidates, rank=other.rank)

    @property
    def is_zero(self) -> bool:
        return self.group is not None and self.group.is_zero

    @property
    def is_nonzero(self) -> bool:
        if self.group is not None:
            return not self.group.is_zero
        if self.rank:
            return True
        return self.candidates is not None and all(not c.is_zero for c in self.candidates)

    def describe(self) -> str:
        if self.group is not None:
            return str(self.group)
        if self.candidates is not None:
            return " or ".join(str(c) for c in sorted(self.candidates))
        return "?" + (f" (rank {self.rank})" if self.rank is not None else "")


@dataclass
class SolveResult:
    sequence: ExactSequence
    terms: list[GroupTerm]
    images: list[str]
    trace: list[Step]

    def term(self, name: str) -> GroupTerm:
        return self.terms[self.sequence.index(name)]

    def as_sequence(self) -> ExactSequence:
        return ExactSequence(list(self.terms), list(self.sequence.arrows))


class _Solver:
    def __init__(self, seq: ExactSequence):
        self.seq = seq
        n = len(seq.terms)
        self.n = n
        self.trace: list[Step] = []
        self.G = [
            _Slot(t.name, (i, i), t.group, t.candidates, t.rank) for i, t in enumerate(seq.terms)
        ]
        self.I = [
            _Slot(f"im({seq.terms[a].name}->{seq.terms[a + 1].name})", (a, a + 1))
            for a in range(n - 1)
        ]
        self._check_annotations()

    def log(self, rule, slot: _Slot, reason):
        self.trace.append(Step(rule, slot.label, slot.describe(), reason))

    def set(self, rule, slot: _Slot, reason, **kw) -> bool:
        if slot.refine(**kw):
            self.log(rule, slot, reason)
            return True
        return False

    def equate(self, rule, dst: _Slot, src: _Slot, reason) -> bool:
        if dst.copy_from(src):
            self.log(rule, dst, reason)
            return True
        return False

    def _check_annotations(self):
        for a, arr in enumerate(self.seq.arrows):
            name = f"arrow {self.seq.terms[a].name}->{self.seq.terms[a + 1].name}"
            if arr.zero and arr.nontrivial:
                raise Contradiction(f"{name} annotated both zero and nontrivial", (a, a + 1))
            if arr.zero and arr.image_rank:
                raise Contradiction(f"{name} is zero but has image rank {arr.image_rank}", (a, a + 1))
            src, dst = self.seq.terms[a], self.seq.terms[a + 1]
            if arr.nontrivial and (src.is_zero or dst.is_zero):
                raise Contradiction(f"{name} is nontrivial between a zero group", (a, a + 1))
            if arr.image_rank is not None:
                for t in (src, dst):
                    r = t.rational_rank()
                    if r is not None and arr.image_rank > r:
                        raise Contradiction(f"{name} image rank exceeds rank of {t.name}", (a, a + 1))

    # rules

    def r0(self) -> bool:
        ch = False
        G, I = self.G, self.I
        for a, arr in enumerate(self.seq.arrows):
            if arr.zero:
                ch |= self.set("R0", I[a], "map annotated zero", group=FgAbelianGroup())
            if arr.image_rank is not None:
                ch |= self.set("R0", I[a], "image rank annotation", rank=arr.image_rank)
            if G[a].is_zero or G[a + 1].is_zero:
                ch |= self.set("R0", I[a], "map from or into the zero group", group=FgAbelianGroup())
            if arr.surjective:
                ch |= self.equate("R0", I[a], G[a + 1], "map annotated surjective")
                ch |= self.equate("R0", G[a + 1], I[a], "map annotated surjective")
            if arr.injective and a >= 1:
                ch |= self.set("R0", I[a - 1], "next map is injective", group=FgAbelianGroup())
            if arr.nontrivial and I[a].is_zero:
                raise Contradiction(f"{I[a].label} is zero but the map is annotated nontrivial", (a, a + 1))
        return ch

    def r1_r2_r4_r6_r7(self) -> bool:
        ch = False
        for a in range(1, self.n - 1):
            K, B, Q = self.I[a - 1], self.G[a], self.I[a]
            where = self.G[a].label
            if K.is_zero and Q.is_zero:
                ch |= self.set("R1", B, f"flanked by zero maps at {where}", group=FgAbelianGroup())
            if K.is_zero:
                ch |= self.equate("R1", Q, B, f"0 -> {where} -> image is exact")
                ch |= self.equate("R1", B, Q, f"0 -> {where} -> image is exact")
            if Q.is_zero:
                ch |= self.equate("R1", K, B, f"kernel -> {where} -> 0 is exact")
                ch |= self.equate("R1", B, K, f"kernel -> {where} -> 0 is exact")
            if K.group is not None and Q.group is not None and K.group.is_free and Q.group.is_free:
                ch |= self.set("R2", B, f"free-by-free extension at {where}", group=K.group + Q.group)
            # R4: rank additivity
            rk = (K.rank, B.rank, Q.rank)
            if rk.count(None) == 1:
                if rk[0] is None:
                    ch |= self.set("R4", K, f"rank additivity at {where}", rank=B.rank - Q.rank)
                elif rk[1] is None:
                    ch |= self.set("R4", B, f"rank additivity at {where}", rank=K.rank + Q.rank)
                else:
                    ch |= self.set("R4", Q, f"rank additivity at {where}", rank=B.rank - K.rank)
            elif None not in rk and rk[0] + rk[2] != rk[1]:
                raise Contradiction(f"rank sum violated at {where}", (a - 1, a + 1))
            # R6: subgroups of free groups
            if B.group is not None and B.group.is_free and K.rank is not None:
                ch |= self.set("R6", K, f"subgroup of the free group {where}", group=FgAbelianGroup(K.rank))
            # R7: finite order bookkeeping
            ch |= self.r7(K, B, Q, where)
        # ends: I_0 is a quotient of G_0, I_{N-2} a subgroup of G_{N-1}
        if self.n >= 2:
            ch |= self.r3(self.G[0], self.I[0], "the first map is onto its image")
            last, img = self.G[-1], self.I[-1]
            if last.group is not None and last.group.is_free and img.rank is not None:
                ch |= self.set("R6", img, "subgroup of a free end term", group=FgAbelianGroup(img.rank))
        return ch

    def r7(self, K, B, Q, where) -> bool:
        if B.group is None or not B.group.is_finite:
            return False
        ch = False
        order = B.group.order
        for part, other, what in ((K, Q, "quotient"), (Q, K, "subgroup")):
            if part.group is None:
                continue
            m = part.group.order
            if m is None or order % m:
                raise Contradiction(f"{part.label} cannot sit in an extension of order {order}",
                                    K.window[:1] + Q.window[1:])
            if m == order:
                ch |= self.set("R7", other, f"{what} of {where} by a piece of full order",
                               group=FgAbelianGroup())
            elif B.group.is_cyclic:
                ch |= self.set("R7", other, f"{what} of the cyclic group {where}",
                               group=FgAbelianGroup.cyclic(order // m))
        return ch

    def r3(self, src: _Slot, img: _Slot, reason) -> bool:
        if src.group is None or not src.group.is_finite or img.group is not None:
            return False
        return self.set("R3", img, f"{reason}; quotients of {src.group}", candidates=quotient_types(src.group))

    def r3_all(self) -> bool:
        ch = False
        for a in range(self.n - 1):
            ch |= self.r3(self.G[a], self.I[a], f"{self.G[a].label} maps onto its image")
        return ch

    def r5(self) -> bool:
        ch = False
        z2 = FgAbelianGroup(0, (2,))
        for a, arr in enumerate(self.seq.arrows):
            src, dst = self.G[a], self.G[a + 1]
            if arr.nontrivial and dst.group == z2 and src.group is not None and src.group.is_cyclic:
                ch |= self.equate("R5", self.I[a], dst,
                                  f"nontrivial map from cyclic {src.group} into Z/2 is onto")
        return ch

    def windows(self):
        zeros = [i for i, s in enumerate(self.G) if s.is_zero]
        for lo, hi in zip(zeros, zeros[1:]):
            if hi - lo >= 2:
                yield lo, hi

    def r4_windows(self) -> bool:
        ch = False
        for lo, hi in self.windows():
            inside = list(range(lo + 1, hi))
            unknown = [i for i in inside if self.G[i].rank is None]
            total = sum((-1) ** i * self.G[i].rank for i in inside if self.G[i].rank is not None)
            if not unknown and total != 0:
                raise Contradiction("alternating rank sum is not zero", (lo, hi))
            if len(unknown) == 1:
                (i,) = unknown
                r = -total * (-1) ** i
                if r < 0:
                    raise Contradiction("alternating rank sum forces a negative rank", (lo, hi))
                ch |= self.set("R4", self.G[i], f"alternating rank sum over terms {lo}..{hi}", rank=r)
        return ch

    def run(self) -> SolveResult:
        rules = (self.r0, self.r5, self.r1_r2_r4_r6_r7, self.r3_all, self.r4_windows)
        for _ in range(10 * (self.n + 1) + 100):
            if not any([rule() for rule in rules]):
                break
        else:  # pragma: no cover - the slot lattice is finite
            raise RuntimeError("exact sequence solver did not reach a fixed point")
        terms = []
        for t, s in zip(self.seq.terms, self.G):
            if s.group is not None:
                terms.append(GroupTerm(t.name, group=s.group))
            elif s.candidates is not None:
                terms.append(GroupTerm(t.name, candidates=tuple(s.candidates)))
            else:
                terms.append(GroupTerm(t.name, rank=s.rank))
        return SolveResult(self.seq, terms, [s.describe() for s in self.I], self.trace)


def solve_exact_sequence(seq: ExactSequence) -> SolveResult:
    """Deduce as many terms as the rule set allows; raises :class:`Contradiction`."""
    return _Solver(seq).run()

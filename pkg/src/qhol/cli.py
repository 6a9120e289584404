"""Command-line front end.

Every subcommand builds a :class:`Report` and hands it to :func:`emit_report`.
Output depends only on the arguments and the contents of the data files, so
two runs with the same inputs are byte-identical.

CSV columns per subcommand are the ``columns`` of the report; see README.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .cobordism import (
    BRANCH_PRESETS,
    CobordismError,
    RankQuery,
    branch_preset_result,
    fold_cobordism_analysis,
    fold_torsion_primes,
    morin_crosscheck,
    morin_rank_closed_form,
    rank_contributions,
    rational_rank,
    verify_prop_txi,
)
from .char_ring import RingError
from .exact_sequence import Contradiction
from .groups import FgAbelianGroup, GroupError
from .homology import HomologyError, space_homology
from .registry import Registry, RegistryError, morin_set, parse_registry, resolve_sigma
from .series import SeriesError
from .stems import StemsError, StemTable, parse_stems

FORMATS = ("human", "json", "csv")
INPUT_ERRORS = (CobordismError, RegistryError, StemsError, HomologyError, GroupError,
                RingError, SeriesError, Contradiction)


class RangeSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, why: str):
        super().__init__(f"bad range {text!r} at position {pos}: {why}")
        self.text, self.pos = text, pos


def _int_at(text: str, start: int, end: int) -> int:
    chunk = text[start:end]
    if not chunk:
        raise RangeSyntaxError(text, start, "expected an integer")
    sign = 1 if chunk[0] == "-" else 0
    if not chunk[sign:].isdigit():
        bad = next(i for i, ch in enumerate(chunk) if not (ch.isdigit() or (i == 0 and ch == "-")))
        raise RangeSyntaxError(text, start + bad, f"unexpected character {chunk[bad]!r}")
    return int(chunk)


def parse_range(text: str) -> list[int]:
    """``"4"`` -> [4]; ``"0..6"`` -> [0, ..., 6] inclusive; ``"3..2"`` -> []."""
    sep = text.find("..")
    if sep < 0:
        return [_int_at(text, 0, len(text))]
    lo = _int_at(text, 0, sep)
    hi = _int_at(text, sep + 2, len(text))
    return list(range(lo, hi + 1))


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except RangeSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _coeff_arg(text: str) -> int:
    if text == "Z":
        return 0
    if text.startswith("Z/"):
        try:
            p = int(text[2:])
        except ValueError:
            p = 0
        if p >= 2:
            return p
    raise argparse.ArgumentTypeError(f"coefficients must be Z or Z/p, got {text!r}")


# data files

@dataclass(frozen=True)
class DataFile:
    label: str
    text: str

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


def _read_data(flag: Optional[str], env: str, bundled: str) -> DataFile:
    path = flag or os.environ.get(env)
    if path:
        p = Path(path)
        try:
            return DataFile(p.name, p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise RegistryError(f"cannot read {path}: {exc.strerror}") from None
    text = resources.files("qhol.data").joinpath(bundled).read_text(encoding="utf-8")
    return DataFile(f"bundled:{bundled}", text)


@dataclass
class Context:
    registry_file: DataFile
    stems_file: DataFile
    _registry: Optional[Registry] = None
    _stems: Optional[StemTable] = None

    @property
    def registry(self) -> Registry:
        if self._registry is None:
            self._registry = parse_registry(self.registry_file.text.splitlines(), self.registry_file.label)
        return self._registry

    @property
    def stems(self) -> StemTable:
        if self._stems is None:
            self._stems = parse_stems(self.stems_file.text.splitlines(), self.stems_file.label)
        return self._stems

    def meta(self) -> dict:
        return {
            "tool": "qhol",
            "version": __version__,
            "data": {
                "registry": {"source": self.registry_file.label, "sha256": self.registry_file.sha256},
                "stems": {"source": self.stems_file.label, "sha256": self.stems_file.sha256},
            },
        }


# reports

@dataclass
class Report:
    command: str
    inputs: dict
    columns: list[str]
    rows: list[dict]
    summary: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "inputs": dict(self.inputs, command=self.command),
            "results": dict(self.summary, rows=self.rows),
            "trace": self.trace,
            "meta": self.meta,
        }


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def _human(r: Report) -> str:
    out = []
    table = [r.columns] + [[_cell(row.get(c)) for c in r.columns] for row in r.rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(r.columns))]
    for idx, line in enumerate(table):
        out.append("  ".join(cell.rjust(w) if idx else cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
        if idx == 0:
            out.append("  ".join("-" * w for w in widths))
    for key in sorted(r.summary):
        out.append(f"{key}: {_cell(r.summary[key])}")
    out += r.notes
    return "\n".join(out) + "\n"


def _csv(r: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(r.columns)
    for row in r.rows:
        w.writerow([_cell(row.get(c)) for c in r.columns])
    return buf.getvalue()


def emit_report(r: Report, fmt: str = "human") -> bytes:
    if fmt == "json":
        text = json.dumps(r.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    elif fmt == "csv":
        text = _csv(r)
    elif fmt == "human":
        text = _human(r)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


# subcommands

def cmd_rank(a, ctx: Context) -> Report:
    names = [s for s in a.sigma.split(",") if s]
    if not names:
        raise CobordismError("--sigma needs at least one singularity name")
    sigma = tuple(resolve_sigma(names, a.k, ctx.registry))
    rows, trace, notes = [], [], []
    for n in a.n:
        q = RankQuery(sigma, n, a.k)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            r = rational_rank(q, ctx.registry)
        notes += [f"warning: {w.message}" for w in caught]
        rows.append({"n": n, "k": a.k, "sigma": "+".join(names), "rank": r})
        trace.append({"n": n, "contributions": [
            {"singularity": s, "degree": d, "rank": c} for s, d, c in rank_contributions(q)]})
    return Report("rank", {"sigma": names, "k": a.k, "n": a.n}, ["n", "k", "sigma", "rank"], rows,
                  trace=trace, notes=sorted(set(notes)))


def cmd_morin(a, ctx: Context) -> Report:
    rows, trace = [], []
    for n in a.n:
        for k in a.k:
            for r in a.r:
                if a.check:
                    c = morin_crosscheck(n, k, r)
                    rows.append(c.to_json())
                    trace.append({"n": n, "k": k, "r": r, "sum_over_eta": [
                        {"singularity": s, "degree": d, "rank": v}
                        for s, d, v in rank_contributions(RankQuery(tuple(morin_set(r, k)), n, k))]})
                else:
                    rows.append({"n": n, "k": k, "r": r, "closed_form": morin_rank_closed_form(n, k, r)})
    inputs = {"n": a.n, "k": a.k, "r": a.r, "check": a.check}
    if not a.check:
        return Report("morin", inputs, ["n", "k", "r", "closed_form"], rows)
    mism = sum(1 for row in rows if row["status"] == "mismatch")
    summary = {"status": "mismatch" if mism else "agree", "mismatches": mism, "checked": len(rows)}
    return Report("morin", inputs, ["n", "k", "r", "closed_form", "sum_over_eta", "status"], rows,
                  summary, trace)


def _largest_first(term) -> str:
    if term.candidates is not None:
        return " or ".join(str(c) for c in reversed(term.candidates))
    return str(term)


def cmd_fold_table(a, ctx: Context) -> Report:
    if not 0 <= a.n_max <= 5:
        raise CobordismError("--n-max must be between 0 and 5")
    rows, trace, notes = [], [], []
    sigma = tuple(morin_set(1, 1))
    for n in range(a.n_max + 1):
        fa = fold_cobordism_analysis(n, ctx.stems)
        q = fa.qhol
        expected_rank = rational_rank(RankQuery(sigma, n, 1))
        rows.append({
            "n": n,
            "group": _largest_first(q),
            "determined": q.group is not None,
            "rational_rank": fa.rational_rank,
            "rank_by_eta": expected_rank,
        })
        trace.append(fa.to_json())
        if a.trace:
            notes.append(f"n={n}:")
            notes += [f"  fact: {f}" for f in fa.facts]
            notes += [f"  {s.rule}: {s.target} := {s.value}  ({s.reason})" for s in fa.solved.trace]
    consistent = all(r["rational_rank"] == r["rank_by_eta"] for r in rows)
    return Report("fold-table", {"n_max": a.n_max},
                  ["n", "group", "determined", "rational_rank", "rank_by_eta"], rows,
                  {"ranks_consistent": consistent}, trace, notes)


def cmd_torsion_primes(a, ctx: Context) -> Report:
    rows, trace = [], []
    ok = True
    for n in a.n:
        p_max = a.p_max if a.p_max is not None else n + 10
        tp = fold_torsion_primes(n, p_max)
        for p in sorted(tp.reports):
            rep = tp.reports[p]
            predicate = 2 * p > n + 5
            ok &= predicate == rep.vanishes
            rows.append({"n": n, "p": p, "certified": rep.vanishes, "in_serre_range": rep.in_serre_range,
                         "predicate": predicate})
        trace.append(tp.to_json())
    return Report("torsion-primes", {"n": a.n, "p_max": a.p_max},
                  ["n", "p", "certified", "in_serre_range", "predicate"], rows,
                  {"status": "agree" if ok else "mismatch"}, trace)


def cmd_verify_txi(a, ctx: Context) -> Report:
    rep = verify_prop_txi(a.max_degree)
    return Report("verify-txi", {"max_degree": a.max_degree}, ["degree", "coeff", "thom", "smash", "equal"],
                  rep.rows, {"status": "agree" if rep.all_equal else "mismatch", "all_equal": rep.all_equal})


def cmd_homology(a, ctx: Context) -> Report:
    h = space_homology(a.space, a.max_degree + 2, a.coeff, a.reduced)
    top = min(a.max_degree, len(h.groups) - 1) if h.complete else a.max_degree
    rows = [{"degree": d, "group": str(h.group(d)), "rank": h.rank(d)} for d in range(top + 1)]
    coeff = "Z" if a.coeff == 0 else f"Z/{a.coeff}"
    return Report("homology", {"space": a.space, "coeff": coeff, "reduced": a.reduced, "max_degree": a.max_degree},
                  ["degree", "group", "rank"], rows, {"space": h.name or a.space})


def cmd_branch(a, ctx: Context) -> Report:
    res = branch_preset_result(a.preset)
    row = {k: res[k] for k in ("preset", "branch_class", "pairing", "expected_branch_points")}
    status = "agree" if res["pairing"] == res["expected_branch_points"] else "mismatch"
    return Report("branch", {"preset": a.preset}, list(row), [row], {"status": status}, [res])


COMMANDS = {
    "rank": cmd_rank,
    "morin": cmd_morin,
    "fold-table": cmd_fold_table,
    "torsion-primes": cmd_torsion_primes,
    "verify-txi": cmd_verify_txi,
    "homology": cmd_homology,
    "branch": cmd_branch,
}


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=FORMATS, default=d if suppress else "human")
    p.add_argument("--registry", default=d, help="singularity registry file (env QHOL_REGISTRY)")
    p.add_argument("--stems", default=d, help="stable stems file (env QHOL_STEMS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhol", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("rank", parents=[common], help="rational rank of the cobordism group")
    p.add_argument("--sigma", required=True, help="comma separated singularity names, e.g. Sigma0,A1")
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--n", type=_range_arg, required=True, help="int or a..b")

    p = sub.add_parser("morin", parents=[common], help="printed Morin closed form, optionally checked")
    p.add_argument("--n", type=_range_arg, required=True)
    p.add_argument("--k", type=_range_arg, required=True)
    p.add_argument("--r", type=_range_arg, required=True)
    p.add_argument("--check", action="store_true", help="compare against the sum over singularities")

    p = sub.add_parser("fold-table", parents=[common], help="fold cobordism groups for n = 0..5")
    p.add_argument("--n-max", type=_nonneg, default=5)
    p.add_argument("--trace", action="store_true", help="print the derivation in human format")

    p = sub.add_parser("torsion-primes", parents=[common], help="odd primes with no torsion, by AHSS")
    p.add_argument("--n", type=_range_arg, required=True)
    p.add_argument("--p-max", type=_nonneg, default=None)

    p = sub.add_parser("verify-txi", parents=[common], help="Thom space homology two ways")
    p.add_argument("--max-degree", type=_nonneg, required=True)

    p = sub.add_parser("homology", parents=[common], help="cellular homology of a standard space")
    p.add_argument("--space", required=True, help="CP(n), RP(n), CP(n)/CP(m), S(n), point, susp(X); n may be inf")
    p.add_argument("--coeff", type=_coeff_arg, default=0, help="Z or Z/p")
    p.add_argument("--max-degree", type=_nonneg, default=20)
    p.add_argument("--reduced", action="store_true")

    p = sub.add_parser("branch", parents=[common], help="branch locus of a preset cover")
    p.add_argument("--preset", required=True, choices=sorted(BRANCH_PRESETS))
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    out = stdout if stdout is not None else sys.stdout.buffer
    try:
        ctx = Context(
            _read_data(a.registry, "QHOL_REGISTRY", "registry.txt"),
            _read_data(a.stems, "QHOL_STEMS", "stems.txt"),
        )
        report = COMMANDS[a.command](a, ctx)
    except INPUT_ERRORS as exc:
        print(f"qhol {a.command}: error: {exc}", file=sys.stderr)
        return 2
    report.meta = ctx.meta()
    out.write(emit_report(report, a.format))
    out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())

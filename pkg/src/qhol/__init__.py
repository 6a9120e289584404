"""Exact computations for cobordism groups of quasi-holomorphic singular maps."""

__version__ = "0.1.0"

from .groups import FgAbelianGroup
from .homology import HomologyResult, space_homology
from .cobordism import (
    RankQuery,
    branch_locus_class,
    fold_cobordism_analysis,
    fold_torsion_primes,
    morin_crosscheck,
    morin_rank_closed_form,
    rational_rank,
    verify_prop_txi,
)

"""liesynth: constructive switching-schedule synthesis on compact matrix Lie groups.

Given a set of anti-Hermitian generators, build schedules of one-parameter
evolutions exp(A_j t) that drive the identity to an arbitrary reachable
group element: exactly (via matrix logs and a neighborhood factorization),
or to arbitrary accuracy (by iterating simulable products), with negative
durations repaired through periodicity or Diophantine approximation.
"""

from .algebra import (
    BasisCatalog,
    Bracket,
    CatalogEntry,
    Decomposition,
    Generator,
    Provenance,
    Similarity,
    close_by_brackets,
    close_by_similarity,
    decompose,
    expansion_steps,
    similarity_conjugate,
)
from .combined import compare_methods, split_product, split_schedule, synthesize_combined
from .errors import (
    BranchPoint,
    ExhaustedCandidates,
    InvalidInput,
    LieSynthError,
    MNotFound,
    NoConvergence,
    ResidualTooLarge,
    SearchBudgetExceeded,
    TargetUnreachable,
)
from .exact import ExactSolution, neighborhood_solve, reachability_check, synthesize_exact
from .linalg import (
    AlgebraElement,
    bracket,
    expm,
    frob_norm,
    independent,
    logm_principal,
    matrix_power,
    principal_sqrt,
    unitarity_defect,
)
from .program import (
    Factor,
    ProductProgram,
    PulseSchedule,
    atom,
    commutate,
    concat,
    evaluate,
    factor_budget,
    invert,
    program_for,
    scale,
    to_schedule,
    word_length_sequence,
)
from .timefix import (
    FrequencySet,
    Replacement,
    detect_period,
    positive_time,
    rewrite_schedule,
)
from .trotter import IteratedSynthesis, error_curve, iterate_program, synthesize_trotter

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "BasisCatalog",
    "Bracket",
    "BranchPoint",
    "CatalogEntry",
    "Decomposition",
    "ExactSolution",
    "ExhaustedCandidates",
    "Factor",
    "FrequencySet",
    "Generator",
    "InvalidInput",
    "IteratedSynthesis",
    "LieSynthError",
    "MNotFound",
    "NoConvergence",
    "ProductProgram",
    "Provenance",
    "PulseSchedule",
    "Replacement",
    "ResidualTooLarge",
    "SearchBudgetExceeded",
    "Similarity",
    "TargetUnreachable",
    "atom",
    "bracket",
    "close_by_brackets",
    "close_by_similarity",
    "commutate",
    "compare_methods",
    "concat",
    "decompose",
    "detect_period",
    "error_curve",
    "evaluate",
    "expansion_steps",
    "expm",
    "factor_budget",
    "frob_norm",
    "independent",
    "invert",
    "iterate_program",
    "logm_principal",
    "matrix_power",
    "neighborhood_solve",
    "positive_time",
    "principal_sqrt",
    "program_for",
    "reachability_check",
    "rewrite_schedule",
    "scale",
    "similarity_conjugate",
    "split_product",
    "split_schedule",
    "synthesize_combined",
    "synthesize_exact",
    "synthesize_trotter",
    "to_schedule",
    "unitarity_defect",
    "word_length_sequence",
]

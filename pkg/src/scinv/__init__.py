"""Generalized matrix inverses: Moore-Penrose, unit-consistent, Drazin and
similarity-consistent, with an exact rational backend and a float backend.
"""

from .exact import (
    CharPoly,
    ExactJordanForm,
    IrrationalSpectrum,
    RationalMatrix,
    charpoly,
    exact_jordan,
    exact_mp_inverse,
    format_rational,
    nullspace,
    parse_rational,
    rational_roots,
    rref,
)
from .floatcore import (
    ChainFailure,
    JordanOptions,
    NumericJordanForm,
    SvdFactors,
    auto_threshold,
    complex_symmetric_form,
    eigenvalues,
    mp_inverse,
    mp_inverse_fixed_rank,
    numeric_rank,
    numerical_jordan,
    svd,
)
from .inverses import (
    InverseKind,
    PenroseReport,
    RankMode,
    UcFactors,
    consistency_check,
    drazin_index,
    drazin_inverse,
    matrix_rank,
    penrose_check,
    rga,
    sc_inverse,
    sc_inverse_symmetric,
    solve_linear_model,
    uc_factorize,
    uc_inverse,
)
from .io import MatrixParseError, dump_matrix, load_matrix, parse_matrix, serialize_matrix
from .simlab import (
    SimConfig,
    SimRecord,
    SimSummary,
    build_system,
    ground_truth_sc,
    run_experiment,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "CharPoly",
    "ExactJordanForm",
    "IrrationalSpectrum",
    "RationalMatrix",
    "charpoly",
    "exact_jordan",
    "exact_mp_inverse",
    "format_rational",
    "nullspace",
    "parse_rational",
    "rational_roots",
    "rref",
    "ChainFailure",
    "JordanOptions",
    "NumericJordanForm",
    "SvdFactors",
    "auto_threshold",
    "complex_symmetric_form",
    "eigenvalues",
    "mp_inverse",
    "mp_inverse_fixed_rank",
    "numeric_rank",
    "numerical_jordan",
    "svd",
    "InverseKind",
    "PenroseReport",
    "RankMode",
    "UcFactors",
    "consistency_check",
    "drazin_index",
    "drazin_inverse",
    "matrix_rank",
    "penrose_check",
    "rga",
    "sc_inverse",
    "sc_inverse_symmetric",
    "solve_linear_model",
    "uc_factorize",
    "uc_inverse",
    "MatrixParseError",
    "dump_matrix",
    "load_matrix",
    "parse_matrix",
    "serialize_matrix",
    "SimConfig",
    "SimRecord",
    "SimSummary",
    "build_system",
    "ground_truth_sc",
    "run_experiment",
    "summarize",
    "__version__",
]

"""Compare block error-correction codes as statistical experiments."""

from .codes import (
    BlockCode,
    RealCodeMatrix,
    StochasticCodeMatrix,
    bch,
    build_code,
    encode,
    hamming,
    real_code_matrix,
    repetition,
    single_parity,
    stochastic_code_matrix,
)
from .discrete import (
    Dichotomy,
    Prior,
    SymbolChannel,
    TransferMatrix,
    bsc,
    equivalent_bit_dichotomy,
    likelihood_row,
    transfer_matrix,
)
from .errors import GuardExceeded
from .gaussian import (
    DeficiencyEstimate,
    LoewnerVerdict,
    Relation,
    compare_mimo,
    deficiency_bound,
    loewner_compare,
    psd_test,
    range_contains,
)
from .majorize import (
    Boundary,
    GarblingCertificate,
    MajorizationRelation,
    MajorizationVerdict,
    boundary_dominates,
    compare_dichotomies,
    compare_transfer_matrices,
    majorization_check_lp,
    zonotope_boundary,
)
from .oracle import (
    ErrorRateReport,
    exact_bit_error_bsc,
    exact_block_error_bsc,
    ml_decode_awgn,
    packet_error_mc,
)

__version__ = "0.1.0"

"""Word-error-rate bounds and Monte-Carlo validation for Reed-Solomon
coded modulation over AWGN channels."""

from .bounds import (
    BoundPoint,
    NoiseModel,
    QuadratureError,
    bound_curve,
    cap_fraction,
    chi_norm_pdf,
    q_function,
    radius_for_escape_probability,
    sphere_bound,
    sphere_escape_probability,
    union_bound,
)
from .constellation import (
    Constellation,
    MappingRule,
    make_constellation,
    map_word,
    pair_distance_spectrum,
    sample_random_mapping,
)
from .gf import Field
from .rs import (
    Codeword,
    CodeTooLargeError,
    DecodeResult,
    RsCode,
    chase_list_decode,
    decode_hdd,
    exhaustive_ml,
    sphere_list,
)
from .simulate import (
    AcceptanceRateError,
    SandwichResult,
    SimConfig,
    WerEstimate,
    awgn_sample,
    early_exit_ml_error,
    estimate_in_sphere_wer,
    sandwich_bounds,
    simulate_wer,
)
from .spectrum import (
    DistanceSpectrum,
    HammingSpectrum,
    codebook_distance_spectrum,
    ensemble_distance_spectrum,
    hamming_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceRateError",
    "BoundPoint",
    "Codeword",
    "CodeTooLargeError",
    "Constellation",
    "DecodeResult",
    "DistanceSpectrum",
    "Field",
    "HammingSpectrum",
    "MappingRule",
    "NoiseModel",
    "QuadratureError",
    "RsCode",
    "SandwichResult",
    "SimConfig",
    "WerEstimate",
    "awgn_sample",
    "bound_curve",
    "cap_fraction",
    "chase_list_decode",
    "chi_norm_pdf",
    "codebook_distance_spectrum",
    "decode_hdd",
    "early_exit_ml_error",
    "ensemble_distance_spectrum",
    "estimate_in_sphere_wer",
    "exhaustive_ml",
    "hamming_spectrum",
    "make_constellation",
    "map_word",
    "pair_distance_spectrum",
    "q_function",
    "radius_for_escape_probability",
    "sample_random_mapping",
    "sandwich_bounds",
    "simulate_wer",
    "sphere_bound",
    "sphere_escape_probability",
    "sphere_list",
    "union_bound",
    "__version__",
]

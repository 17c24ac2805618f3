"""charseq-kit: characteristic sequences of discrete real point sets, the
extreme annihilating measures they generate, and numerical density criteria
for weighted polynomial approximation.

Hot summation loops run through a compiled extension when available and a
bit-identical pure-Python fallback otherwise; see charseq_kit._kernels.
"""

from ._kernels import BACKEND as kernel_backend
from .charseq import (CharacteristicSequence, CharEntry, char_sequence,
                      char_value, insertion_delta)
from .errors import (CollisionError, InputError, NearCollisionWarning,
                     NumericError)
from .measures import (DiscreteMeasure, annihilation_report, cauchy_transform,
                       cauchy_transform_logpolar, decay_profile,
                       extreme_property_check, masses_from_charseq,
                       modified_cauchy_transform, moment,
                       moment_shift_identity, w_finiteness)
from .sequences import (BalanceReport, DensityReport, DiscreteSequence,
                        GeneratorSpec, balance_partial_sums,
                        doubling_schedule, materialize, upper_density)

__version__ = "0.1.0"

__all__ = [
    "BalanceReport", "CharEntry", "CharacteristicSequence", "CollisionError",
    "DensityReport", "DiscreteMeasure", "DiscreteSequence", "GeneratorSpec",
    "InputError", "NearCollisionWarning", "NumericError",
    "annihilation_report", "balance_partial_sums", "cauchy_transform",
    "cauchy_transform_logpolar", "char_sequence", "char_value",
    "decay_profile", "doubling_schedule", "extreme_property_check",
    "insertion_delta", "kernel_backend", "masses_from_charseq",
    "materialize", "modified_cauchy_transform", "moment",
    "moment_shift_identity", "upper_density", "w_finiteness",
]

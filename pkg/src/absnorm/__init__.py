"""Absolute norms on the plane and octahedrality moduli of absolute sums."""

__version__ = "0.1.0"

from .bm import LinearMap, bm_search, bm_upper, check_s_isometry_invariance, operator_norm
from .dual import bidual_check, dual, duality_chain_check
from .errors import (CertificationUnavailable, DimensionMismatch, EmptySample,
                     InconsistentNorm, InfinityNormExcluded, ResolutionExhausted,
                     SingularMatrix, SpecError)
from .geometry import (Extreme, NormProfile, asq_obstruction, classify_extremes,
                       is_sc_point, lasq2_modulus, loh3_modulus, positive_octahedrality,
                       profile, r_of)
from .norm2 import (INF, ONE, TWO, AbsoluteNorm, DualNumeric, PNorm, Polygonal, Swapped,
                    boundary, evaluate, swap, validate)
from .report import VerificationReport
from .space import (FSum, FiniteSpace, ImageSpace, ModuliReport, Polyhedral, PSpace,
                    SliceQuery, lasq_defect, m_of_x, oh_radius, s_modulus, slice_diameter)
from .specs import load_norm, load_space, parse_norm, parse_space
from .verify import (check_asq_impossible, check_lemma_infty, check_loh2, check_loh3,
                     check_prop_loh, check_sum_lasq_transfer)

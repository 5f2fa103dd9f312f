"""Exact free-group and Magnus-series arithmetic with numerical checks of
BMO, H^1 and L^4 inequalities for lacunary Fourier series on free groups."""
from .cnd import cnd_gram_test, schoenberg_test
from .errors import (BudgetExceededError, ConvergenceError, LacunaeError, LacunarityError,
                     PositivityError, RankMismatchError, UndecidedOrderError, WordParseError)
from .fourier import (FourierElement, MultiplierSpec, apply_multiplier, bmo_defect, bmo_kernel,
                      c_delta, default_t_grid, h1_integrand, h1_kernel, kernel_expansion,
                      schur_sums, semigroup, trace_moment, trace_pairing)
from .lacunarity import (LacunarityCertificate, integer_lacunary, prop51_check,
                         psi_lacunary_delta, rudin_count, rudin_lacunarity_estimate)
from .magnus import (JProfile, NCPolynomial, j_coefficient, j_profile, j_profile_closed_form,
                     magnus_embed, nc_multiply, subgroup_membership, transference_check)
from .norms import (CompressedOperator, bmo_norm_estimate, compress, h1_norm_estimate,
                    operator_norm_estimate, spectral_trace)
from .order import compare, is_positive, order_compare, positive_part_split, sort_words
from .paley import (jab_decomposition, jab_functional, lambda4_check, paley_split, reH1_norm,
                    theorem1_check)
from .words import LengthFunction, Word, ball, ball_size, format_word, parse_word

__version__ = "0.1.0"

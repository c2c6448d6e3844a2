"""hypenergy: exact experiments on sum-product energies, hyperbola
incidences, SL2 matrix-set energies and Kloosterman bilinear forms over
prime fields, with integer-mode counterparts over Z.

Everything countable is counted exactly; analytic identities come with
explicit float tolerances; inequality checks with unspecified constants
report their true ratios against documented envelope constants.
"""

from .field import (FieldContext, FpSet, RepTable, difference_set, dilate,
                    is_prime, make_context, product_set, quotient_set,
                    rep_additive, rep_multiplicative, sumset, translate)
from .spectral import (Spectrum, WeightFn, balanced, dft, idft,
                       spectrum_lq_norm, wiener_norm)
from .energies import (EnergyReport, additive_energy, check_progression_energy,
                       d2_quantity, e_plus_k, multiplicative_energy, t_plus_k)
from .reports import BoundReport
from .sl2 import (Mat2, MatSet, action_sum, counting_lemma_check, e_lk_group,
                  e_rk_group, free_group_check, g_diag_set, g_lambda_set,
                  g_lambda_set_int, lower_unipotent, mobius_apply,
                  t_2k_integer_mode, t_k_group, trace_formula_check,
                  transitivity_bound_check, unipotent_u, v_matrix)
from .incidence import (bound_asym_Z, bound_prop_Re, bound_progression,
                        bound_rAA, bound_thm1, bound_thm_hyp_full,
                        count_hyperbola, count_hyperbola_int, deviation,
                        rho_bound, shift_inverse_profile)
from .kloosterman import (bilinear_form, bound_basic, bound_thm_NM,
                          kloosterman_sum, kloosterman_table, kloosterman_value)

__version__ = "0.1.0"

"""Adsorbing prudent walks: exact enumeration and kernel-method generating
functions, with the phase and height analysis built on them."""

__version__ = "0.1.0"

from .errors import (BranchError, DegenerateError, LimitError, NearCriticalWarning,
                     NonDivisibleError, OscillationWarning, PruwalkError, TruncationError,
                     UnsupportedModel, ValuationError)
from .series import (DEFAULT_ORDER, Poly, Series, series_add, series_derivative, series_div,
                     series_mul, series_sqrt, series_substitute)
from .walks import (HeightTable, Walk, WalkFamily, WeightTable, count_walks_dp, enumerate_walks,
                    height_statistics, is_admissible)
from .kernel import (KernelContext, ResidualReport, capital_lambda, full_solution, kernel_pieces,
                     lambda_series, r_u0_series, t_zv_series, verify_functional_equations, w_series)
from .baselines import (AsymptoticFit, DirectedModel, baseline_critical_fugacity,
                        baseline_height_profile, baseline_partition, fit_sqrt_amplitude)
from .phase import (CRITICAL_POLYNOMIALS, CriticalPolynomials, PhasePoint, SingularityEstimate,
                    critical_point, free_energy, isolate_real_roots, ratio_estimate,
                    surface_density, transition_height_report)

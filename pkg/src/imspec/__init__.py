"""Integral means spectra of univalent rational maps.

Classification by unit-circle pole structure, closed-form spectra for the
orderly classes, numerical spectrum estimation from first principles, and the
Schwarzian-norm / weighted-space multiplier identities that accompany them.
"""

from .config import DEFAULT, RunConfig
from .poly import ComplexPoly, RationalFn, rational_derivative, reduce_gcd, taylor_stream
from .roots import RootSet, circle_partition, find_roots
from .classify import (ClassLabel, ClosedFormSpectrum, DerivativeFactorization,
                       classify, closed_form_pieces, closed_form_spectrum,
                       factor_derivative)
from .ims import (AnalyticDerivative, FormulaDerivative, RationalDerivative,
                  SpectrumEstimate, branched_log_derivative,
                  coefficient_growth_spectrum, estimate_spectrum, integral_means,
                  power_deformation)
from .schwarzian import (WeightedSupNorm, pre_schwarzian, pre_schwarzian_gap,
                         schwarzian, weighted_sup_norm)
from .bergman import (coeff_norm, area_norm_oracle, binomial_series, koebe_target,
                      multiplier_lower_bound, multiplier_ratio, shimorin_report)
from .catalog import (CatalogEntry, boundary_selfintersection_probe, list_names,
                      load_catalog, lookup, reference_universal_spectrum)

__version__ = "0.1.0"

"""Smooth cut-off functions on complex projective space.

Builds smooth [0,1]-valued functions that are exactly 1 on a union of
Fubini-Study balls and vanish outside its delta-neighbourhood, by averaging
the indicator of the half-widened set over automorphisms drawn from a
compactly supported radial measure near the identity, and provides the
finite-difference machinery to measure how the derivatives grow as delta
shrinks.
"""

from .cutoff import (CutoffConfig, CutoffFunction, VerificationReport,
                     annulus_grid, build_cutoff, choose_theta,
                     indicator_fattened, scaling_experiment, verify_cutoff)
from .errors import (ChartUndefined, ConfigError, DegenerateImage,
                     DeltaOutOfRange, NormalizationUndefined, OutOfChart,
                     StepTooSmall, ThetaZero)
from .geometry import (Ball, BallComparisonReport, ChartCoordinates,
                       CompactSetSpec, ProjectivePoint, ball_comparison_check,
                       chart_norm, dist_to_set, fs_distance, full_norm,
                       rows_dist_to_set, to_chart)
from .lie import (AlgebraElement, NormalizedMatrix, ShearParams, act,
                  chart_translate, chart_translate_jacobian,
                  check_distortion, estimate_distortion, exp_chart, exp_sl,
                  from_coords, log_chart, norm_s, phi_normalize, shear,
                  shear_translate, sl_basis, to_coords)
from .measure import (MollifierSpec, ScaledMeasure, bump_profile, density,
                      get_mollifier, normalization, sample, sample_matrices,
                      scaled_density)
from .regularize import (FunctionOnP, RegularizedFunction, ScalingReport,
                         c_alpha_estimate, finite_diff, regularize,
                         scaling_slope)

__version__ = "0.1.0"

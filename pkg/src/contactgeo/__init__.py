"""Verification toolkit for 3-dimensional contact Riemannian geometry.

The layers, bottom up: truncated Taylor jets and univariate series
(``jets``, ``series``), expression parsing and evaluation (``exprs``),
fields on a chart (``fields``), curvature machinery (``geometry``),
contact-structure diagnostics (``contact``), soliton residuals and the
reduced flow (``solitons``), model structures and warp profiles
(``atlas``), and on top the manifest/suite/report plumbing driven by
the ``contactgeo`` command.
"""

__version__ = "0.1.0"

from .jets import DIM, Jet3, JetDomainError, JetError, seed_chart
from .series import Series1
from .exprs import ExprError, eval_jet, eval_series, eval_value, parse
from .fields import (Chart, ChartError, MetricField, ScalarField,
                     TensorField, one_form, vector_field)
from .geometry import (DegenerateMetricError, Geometry,
                       UnsupportedValenceError, values_of, wedge)
from .probes import ProbeGrid, random_metric, random_vector
from .reports import CheckReport, all_passed, report_json, report_text
from .contact import (AlmostContactStructure, BetaFit, FitUndefinedError,
                      GaugeError, beta_fit_jet, beta_kenmotsu_fit,
                      d_homothetic, eta_einstein_decompose,
                      identity_residuals, identity_suite,
                      nullity_diagnostics, structure_residuals,
                      validate_structure)
from .solitons import (FlowTrajectory, ShortTimeExistenceWarning,
                       SolitonSpec, bourguignon_velocity,
                       einstein_family_flow, gradient_soliton_residual,
                       solve_lambda, soliton_residual)
from .atlas import (BUILTIN_NAMES, ExprProfile, OdeProfile,
                    ProfileRangeError, SingularityError, builtin,
                    sigma_gauge, solve_warp_ode, soliton_f_profile,
                    warp_ode_residual, warped_product)
from .manifest import Manifest, ManifestError, from_builtin, load_manifest
from .suites import SUITE_NAMES, SuiteOptions, SuiteUsageError, run_suite

__all__ = [
    "DIM", "Jet3", "JetDomainError", "JetError", "seed_chart", "Series1",
    "ExprError", "parse", "eval_jet", "eval_series", "eval_value",
    "Chart", "ChartError", "ScalarField", "TensorField", "MetricField",
    "vector_field", "one_form",
    "Geometry", "DegenerateMetricError", "UnsupportedValenceError",
    "values_of", "wedge",
    "ProbeGrid", "random_metric", "random_vector",
    "CheckReport", "report_json", "report_text", "all_passed",
    "AlmostContactStructure", "BetaFit", "FitUndefinedError", "GaugeError",
    "structure_residuals", "validate_structure", "identity_residuals",
    "identity_suite", "beta_kenmotsu_fit", "beta_fit_jet",
    "eta_einstein_decompose", "nullity_diagnostics", "d_homothetic",
    "SolitonSpec", "FlowTrajectory", "ShortTimeExistenceWarning",
    "soliton_residual", "gradient_soliton_residual", "solve_lambda",
    "bourguignon_velocity", "einstein_family_flow",
    "BUILTIN_NAMES", "builtin", "ExprProfile", "OdeProfile",
    "ProfileRangeError", "SingularityError", "solve_warp_ode",
    "warp_ode_residual", "soliton_f_profile", "sigma_gauge",
    "warped_product",
    "Manifest", "ManifestError", "load_manifest", "from_builtin",
    "SUITE_NAMES", "SuiteOptions", "SuiteUsageError", "run_suite",
    "__version__",
]

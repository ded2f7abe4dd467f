"""corrqec: correlated-dephasing noise versus CSS error correction.

Layers, bottom to top: bath (decoherence integrals over the spectral
function), dephasing (the n-qubit channel and its coefficient transforms),
codes (GF(2) machinery and random CSS pairs), oracle (exact small-n
simulation), residual (code-averaged error, asymptotics, scalability),
cli (deterministic CSV scans).
"""

from .errors import ConvergenceError, DomainError, SizeLimitError
from .bath import (
    BathParams, GeometryParams, QuadratureConfig, GammaEstimate,
    spectral_density, decoherence_integrand, gamma, gamma_detailed,
    gamma_pair, scaled_gamma, scaling_identity_sides,
)
from .dephasing import (
    DecoherencePair, BitString, AlphaMatrix, coefficient_c, apply_channel,
    alpha_matrix, p_of_x, beta, log_beta, walsh_transform,
)
from .codes import (
    LinearCode, CssCodePair, CodeBasisState, h2, r_css, dual, min_weight,
    weight_distribution, macwilliams_transform, sample_random_css,
    empirical_goodness, meets_rate_bound, steane_code, codewords,
    coset_representatives, save_code_pair, load_code_pair,
)
from .oracle import (
    PureState, DensityMatrix, PauliLabel, encode, apply_recovery,
    fidelity_formula, residual_exact, x_polarized_state, random_state,
    correction_labels,
)
from .residual import (
    ResidualQuery, ScalingScenario, GammaBudget, AsymptoticResidual,
    ScalabilityRow, ScalabilityReport, code_avg_residual,
    independent_residual, asymptotic_residual, gamma_budget,
    scalability_verdict, geometric_grid,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "SizeLimitError",
    "BathParams", "GeometryParams", "QuadratureConfig", "GammaEstimate",
    "spectral_density", "decoherence_integrand", "gamma", "gamma_detailed",
    "gamma_pair", "scaled_gamma", "scaling_identity_sides",
    "DecoherencePair", "BitString", "AlphaMatrix", "coefficient_c",
    "apply_channel", "alpha_matrix", "p_of_x", "beta", "log_beta",
    "walsh_transform",
    "LinearCode", "CssCodePair", "CodeBasisState", "h2", "r_css", "dual",
    "min_weight", "weight_distribution", "macwilliams_transform",
    "sample_random_css", "empirical_goodness", "meets_rate_bound",
    "steane_code", "codewords", "coset_representatives", "save_code_pair",
    "load_code_pair",
    "PureState", "DensityMatrix", "PauliLabel", "encode", "apply_recovery",
    "fidelity_formula", "residual_exact", "x_polarized_state", "random_state",
    "correction_labels",
    "ResidualQuery", "ScalingScenario", "GammaBudget", "AsymptoticResidual",
    "ScalabilityRow", "ScalabilityReport", "code_avg_residual",
    "independent_residual", "asymptotic_residual", "gamma_budget",
    "scalability_verdict", "geometric_grid",
    "__version__",
]

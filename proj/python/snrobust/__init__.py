"""Robust minimum density power divergence inference for the
three-parameter skew-normal model."""

from snrobust._core import (
    ConditioningError,
    ContaminationScheme,
    DataError,
    FitResult,
    GaConfig,
    GdConfig,
    IntegrationError,
    NumericalError,
    ParameterError,
    SnMoments,
    SnParams,
    WaldTestResult,
    are_table,
    bias_mse_study,
    cdf,
    chisq_quantile,
    chisq_sf,
    contaminated_sample,
    contiguous_power,
    covariance,
    default_init,
    estimator_if,
    fit,
    fit_ga,
    fit_gd,
    fit_mle,
    if_curve,
    log_pdf,
    mills_ratio,
    moments,
    n_integral,
    noncentral_chisq_sf,
    objective,
    objective_gradient,
    outlier_filter_boxplot,
    owens_t,
    pdf,
    power_integral,
    sample,
    score,
    std_normal_cdf,
    std_normal_pdf,
    symmetry_test,
    wald_test,
    xi,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

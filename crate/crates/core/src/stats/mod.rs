//! Estimators for the limit theory: pairings with test functions, replicated scaling
//! experiments with log-log fits, normality diagnostics, correlation functions of the
//! limit process and the limit integrals `I(f)`, `J(f)`.

mod correlation;
mod experiment;
mod functions;
mod moments;
mod regression;
mod tails;

pub use correlation::{
    default_h_max, estimate_i, estimate_j, estimate_one_point_correlation, estimate_two_point_correlation,
    kernel_correlation, lens_volume, limit_constants, limit_variance, ConeAnalytic, CorrelationSource, Estimate,
    LimitConstants, LimitSetup, McEstimate, MonteCarloSource, QuadratureOptions, SpatialSetup,
};
pub use experiment::{
    depoissonization_check, replicate_seed, run_replicates, run_scaling_experiment, DepoissonReport, DepoissonRow,
    EstimateReport, Functional, LambdaEstimate, MethodChoice, ReplicateOutput, RunOptions, Sampling, ScalingExperiment,
    TimeCap,
};
pub use functions::{empirical_pairing, pairwise_sum, TestFunction};
pub use moments::{
    correlation, covariance_matrix, excess_kurtosis, ks_normal, normality_diagnostics, skewness, standardize,
    summarize, Correlation, NormalityReport, NormalityThresholds, Summary,
};
pub use regression::{fit_loglog, linear_fit, FitWindow, LogLogFit};
pub use tails::{
    dominating_exponential, fit_exponential, fit_stretched_rate, localization_sample, survival_curve,
    ExponentialEnvelope, LocalizationSample,
};

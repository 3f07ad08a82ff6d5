"""Active threshold learning and stochastic-sign coordinate descent."""

from ._core import (
    BudgetExhausted,
    Interval,
    LabelOracle,
    LearnerConfig,
    OptimizerConfig,
    Orientation,
    SignOracle,
    ThresholdEstimate,
    TncProblem,
    UcFunction,
    adaptive_learner,
    adaptive_schedule,
    bisect_noiseless,
    bz_learner,
    erm_threshold,
    eta_at,
    excess_risk,
    excess_risk_quadrature,
    fit_rate_slope,
    make_quadratic,
    make_ridge,
    make_separable_power,
    make_tnc_problem,
    optimizer_schedule,
    passive_erm,
    rssgd,
    run_experiment,
    slope_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]

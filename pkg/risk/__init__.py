from risk.metrics import l2_risk, linf_risk
from risk.monte_carlo import Scenario, monte_carlo, lj_distribution, run_repetition
from risk.regression import SlopeFit, fit_power_law, rate_regression

__all__ = [
    "l2_risk", "linf_risk", "Scenario", "monte_carlo", "lj_distribution", "run_repetition",
    "SlopeFit", "fit_power_law", "rate_regression",
]

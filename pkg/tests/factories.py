"""Random models and sequences shared by several test modules."""

import math

import numpy as np

from hawkes_rf import (
    Exponential,
    HawkesModel,
    PowerLaw,
    QExponential,
    Rayleigh,
    SimulationConfig,
    simulate,
)

FAMILIES = ("EXP", "PWL", "QEXP", "RAY")


def stationary_model(family, rng, ratio_range=(0.1, 0.8)):
    """Random model with branching ratio drawn from ``ratio_range``."""
    mu = rng.uniform(0.2, 1.0)
    ratio = rng.uniform(*ratio_range)
    if family == "EXP":
        beta = rng.uniform(0.1, 3.0)
        kernel = Exponential(ratio * beta, beta)
    elif family == "PWL":
        c, p = rng.uniform(0.2, 3.0), rng.uniform(1.5, 5.0)
        kernel = PowerLaw(ratio * (p - 1) * c ** (p - 1), c, p)
    elif family == "QEXP":
        q = rng.uniform(0.0, 1.7)
        kernel = QExponential(ratio * (2 - q), q)
    else:
        eta = rng.uniform(0.05, 2.0)
        kernel = Rayleigh(2 * eta * ratio, eta)
    return HawkesModel(mu, kernel)


def unstable_kernel(family, rng, ratio_range=(1.0, 10.0)):
    """Random kernel with branching ratio in ``(lo, hi]``."""
    lo, hi = ratio_range
    ratio = hi - (hi - lo) * rng.random()
    if family == "EXP":
        beta = rng.uniform(0.05, 5.0)
        return Exponential(ratio * beta, beta)
    if family == "PWL":
        c, p = rng.uniform(0.2, 5.0), rng.uniform(1.2, 5.0)
        return PowerLaw(ratio * (p - 1) * c ** (p - 1), c, p)
    if family == "QEXP":
        q = rng.uniform(-1.0, 1.8)
        return QExponential(ratio * (2 - q), q)
    eta = rng.uniform(0.05, 5.0)
    return Rayleigh(2 * eta * ratio, eta)


def simulated(model, horizon, seed, *stream):
    return simulate(SimulationConfig(model, horizon, seed, stream=tuple(stream)))


def printed_exp_llh(model, seq):
    """Uncorrected exponential log-likelihood, kept to show that it is wrong.

    The decay factors lack the rate: ``alpha * exp(t_i - t_j)`` in the log
    terms and ``exp(-beta T - t_i)`` in the compensator.
    """
    alpha, beta, mu = model.kernel.alpha, model.kernel.beta, model.mu
    t, T = seq.times, seq.horizon
    total = 0.0
    with np.errstate(over="ignore"):
        for i in range(t.size):
            total += math.log(mu + np.sum(alpha * np.exp(t[i] - t[:i])))
        comp = mu * T + alpha / beta * np.sum(1 - np.exp(-beta * T - t))
    return total - comp


def printed_ray_llh(model, seq):
    """Uncorrected Rayleigh log-likelihood: the log terms lack ``gamma (t_i - t_j)``."""
    gamma, eta, mu = model.kernel.gamma, model.kernel.eta, model.mu
    t, T = seq.times, seq.horizon
    total = 0.0
    for i in range(t.size):
        total += math.log(mu + np.sum(np.exp(-eta * (t[i] - t[:i]) ** 2)))
    comp = mu * T + gamma / (2 * eta) * np.sum(1 - np.exp(-eta * (T - t) ** 2))
    return total - comp

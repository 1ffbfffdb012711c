"""Maximum-likelihood fitting, plain (MLE) and with renormalization factors (RF-MLE).

The optimizer searches an unconstrained space: amplitudes and rates are
log-transformed and the q-exponential shape enters as ``log(2 - q)``.  The
power law is searched as ``(log phi(0), log tau, log(p - 1))`` with
``phi(0) = K c**-p`` and ``tau = c / (p - 1)``; its branching ratio is then
``phi(0) tau`` and the exponential limit ``c, p -> inf`` with the shape held
is a single coordinate, ``log(p - 1) -> inf``.  Nothing prevents the search from
ending at a non-stationary kernel; RF-MLE then compares the MLE model with
all of its renormalized variants and keeps the highest log-likelihood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .events import EventSequence
from .exceptions import FitError, NonFiniteLikelihoodError, ParameterDomainError
from .kernels import Exponential, Family, HawkesModel, PowerLaw, QExponential, Rayleigh
from .likelihood import loglikelihood
from .optim import OptimConfig, nelder_mead
from .renorm import Strategy, enumerate_candidates, lambda_hat

# Transformed coordinates beyond this magnitude end the search as a boundary solution.
BOUNDARY = 25.0


def to_unconstrained(model: HawkesModel) -> np.ndarray:
    k = model.kernel
    if model.mu <= 0:
        raise ParameterDomainError("initial mu must be > 0 for the log transform")
    head = [math.log(model.mu)]
    if k.family is Family.EXP:
        tail = [math.log(k.alpha), math.log(k.beta)]
    elif k.family is Family.PWL:
        tail = [math.log(k.K) - k.p * math.log(k.c), math.log(k.c / (k.p - 1)), math.log(k.p - 1)]
    elif k.family is Family.QEXP:
        tail = [math.log(k.a), math.log(2 - k.q)]
    else:
        tail = [math.log(k.gamma), math.log(k.eta)]
    return np.array(head + tail)


def from_unconstrained(family: Family, x) -> HawkesModel:
    """Inverse of :func:`to_unconstrained`; raises ``ParameterDomainError`` on overflow."""
    family = Family.parse(family)
    try:
        e = [math.exp(v) for v in x]
        if family is Family.PWL:
            p = 1.0 + e[3]
            log_c = x[2] + x[3]
            e[1], e[2] = math.exp(x[1] + p * log_c), math.exp(log_c)
    except OverflowError:
        raise ParameterDomainError(f"transformed point {list(x)} overflows") from None
    if family is Family.EXP:
        kernel = Exponential(e[1], e[2])
    elif family is Family.PWL:
        kernel = PowerLaw(e[1], e[2], p)
    elif family is Family.QEXP:
        kernel = QExponential(e[1], 2.0 - e[2])
    else:
        kernel = Rayleigh(e[1], e[2])
    return HawkesModel(e[0], kernel)


@dataclass(frozen=True)
class WindowRule:
    """Lag window for the intensity sums of a given kernel.

    The window is the lag beyond which the kernel carries at most
    ``tail_mass``, capped at ``max_window``.  With both unset the sums are
    exact.
    """

    tail_mass: float | None = None
    max_window: float | None = None

    def __call__(self, kernel) -> float | None:
        window = math.inf
        if self.tail_mass is not None:
            window = kernel.tail_window(self.tail_mass)
        if self.max_window is not None:
            window = min(window, self.max_window)
        return None if math.isinf(window) else window


EXACT = WindowRule()


@dataclass(frozen=True)
class FitResult:
    model: HawkesModel
    llh: float
    method: str
    converged: bool
    iterations: int
    strategy: Strategy | None = None
    epsilon: float | None = None
    at_boundary: bool = False

    @property
    def branching_ratio(self) -> float:
        return self.model.branching_ratio()

    @property
    def family(self) -> Family:
        return self.model.family


def evaluate_llh(model: HawkesModel, seq: EventSequence, rule: WindowRule = EXACT) -> float:
    """The single log-likelihood code path shared by fitting and candidate selection."""
    return loglikelihood(model, seq, window=rule(model.kernel)).value


def default_init(seq: EventSequence, family) -> HawkesModel:
    """Starting model with ``mu = rate / 2`` and branching ratio 1/2.

    The kernel time scale is the mean inter-event gap, or ``T / N`` when the
    events (nearly) coincide or there is only one.
    """
    family = Family.parse(family)
    if seq.n_events == 0:
        raise ValueError("default_init needs a non-empty sequence")
    rate = lambda_hat(seq)
    gap = float(np.mean(np.diff(seq.times))) if seq.n_events > 1 else 0.0
    if gap < 1e-100:
        gap = seq.horizon / seq.n_events
    if family is Family.EXP:
        beta = 1.0 / gap
        kernel = Exponential(0.5 * beta, beta)
    elif family is Family.PWL:
        c, p = gap, 2.0
        kernel = PowerLaw(0.5 * (p - 1) * c ** (p - 1), c, p)
    elif family is Family.QEXP:
        kernel = QExponential(0.25, 1.5)
    else:
        eta = 1.0 / (2.0 * gap * gap)
        kernel = Rayleigh(eta, eta)
    return HawkesModel(0.5 * rate, kernel)


def mle_fit(
    seq: EventSequence,
    family,
    init: HawkesModel | None = None,
    config: OptimConfig | None = None,
    rule: WindowRule = EXACT,
) -> FitResult:
    """Unconstrained Nelder-Mead maximization of the log-likelihood.

    The result may be non-stationary.  The search stops as soon as the best
    vertex has a transformed coordinate beyond ``BOUNDARY`` (for example
    ``mu -> 0`` on an empty sequence, or ``c, p -> inf`` when a power law
    imitates an exponential); such fits are flagged ``at_boundary`` and never
    reported as converged.
    """
    family = Family.parse(family)
    if init is None:
        init = default_init(seq, family)
    if init.family is not family:
        raise ValueError(f"initial model is {init.family.value}, expected {family.value}")

    def objective(x):
        try:
            return -evaluate_llh(from_unconstrained(family, x), seq, rule)
        except (ParameterDomainError, NonFiniteLikelihoodError):
            return math.inf

    def leave_box(x, f):
        return bool(np.max(np.abs(x)) > BOUNDARY)

    try:
        x0 = to_unconstrained(init)
        outcome = nelder_mead(objective, x0, config, callback=leave_box)
    except (ValueError, ParameterDomainError) as exc:
        raise FitError(f"cannot start {family.value} fit from {init.to_dict()}: {exc}") from exc

    model = from_unconstrained(family, outcome.argmin)
    at_boundary = bool(np.any(np.abs(outcome.argmin) > BOUNDARY))
    return FitResult(
        model=model,
        llh=evaluate_llh(model, seq, rule),
        method="MLE",
        converged=outcome.converged and not at_boundary,
        iterations=outcome.iterations,
        at_boundary=at_boundary,
    )


def select_renormalized(seq: EventSequence, mle: FitResult, epsilon: float, rule: WindowRule = EXACT) -> FitResult:
    """RF-MLE selection over ``{mle.model}`` and its renormalizations at ``epsilon``.

    Ties keep the MLE model, then the lower strategy index.
    """
    best_model, best_llh, best_strategy = mle.model, mle.llh, None
    for cand in enumerate_candidates(mle.model, seq, epsilon):
        try:
            llh = evaluate_llh(cand.model, seq, rule)
        except NonFiniteLikelihoodError:
            continue
        if llh > best_llh:
            best_model, best_llh, best_strategy = cand.model, llh, cand.strategy
    return FitResult(
        model=best_model,
        llh=best_llh,
        method="RF-MLE",
        converged=mle.converged,
        iterations=mle.iterations,
        strategy=best_strategy,
        epsilon=float(epsilon),
        at_boundary=mle.at_boundary,
    )


def rf_mle_fit(
    seq: EventSequence,
    family,
    epsilon: float,
    init: HawkesModel | None = None,
    config: OptimConfig | None = None,
    rule: WindowRule = EXACT,
) -> FitResult:
    """MLE fit followed by renormalization-factor selection."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon!r}")
    mle = mle_fit(seq, family, init, config, rule)
    return select_renormalized(seq, mle, epsilon, rule)

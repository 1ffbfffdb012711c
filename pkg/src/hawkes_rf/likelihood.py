"""Conditional intensity and log-likelihood of a univariate Hawkes process.

For a model ``(mu, phi)`` and events ``t_1 < ... < t_N`` on ``[0, T]``::

    llh = sum_i log(mu + sum_{j<i} phi(t_i - t_j))
          - (mu T + sum_i Phi(T - t_i))

where ``Phi`` is the kernel's closed-form cumulative integral.  The
exponential family uses the O(N) recursion ``A_i = exp(-beta dt)(1 + A_{i-1})``;
the others sum over the history directly, optionally restricted to a finite
lag window.  :func:`loglikelihood_oracle` is a slow quadrature reference used
to validate the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _compiled
from .events import EventSequence
from .exceptions import NonFiniteLikelihoodError
from .kernels import Family, HawkesModel


@dataclass(frozen=True)
class LogLikelihood:
    value: float
    n_events: int


def intensity_at(model: HawkesModel, seq: EventSequence, t: float) -> float:
    """``mu + sum_{t_j < t} phi(t - t_j)``; an event exactly at ``t`` is excluded."""
    if not 0 <= t <= seq.horizon:
        raise ValueError(f"t={t!r} outside the observation window [0, {seq.horizon}]")
    past = seq.times[: seq.count_before(t)]
    if past.size == 0:
        return model.mu
    return float(model.mu + np.sum(model.kernel.evaluate(t - past)))


def compensator(model: HawkesModel, seq: EventSequence, t):
    """Integrated intensity from 0 to ``t`` (scalar or array of times)."""
    points = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(points.shape)
    times = seq.times
    for k, u in enumerate(points):
        past = times[: np.searchsorted(times, u, side="left")]
        out[k] = model.mu * u + np.sum(model.kernel.cumulative(u - past))
    return float(out[0]) if np.ndim(t) == 0 else out


def log_intensity_terms(model: HawkesModel, seq: EventSequence, window: float | None = None):
    """Return ``(sum_i log lambda(t_i), ok)`` where ``ok`` is False on a non-positive intensity."""
    w = math.inf if window is None else float(window)
    return _compiled.log_intensity_sum(
        model.family.code, model.kernel.as_array(), model.mu, seq.times, w
    )


def loglikelihood(model: HawkesModel, seq: EventSequence, window: float | None = None) -> LogLikelihood:
    """Closed-form log-likelihood of ``seq`` under ``model``.

    ``window`` truncates the kernel at that lag in both the intensity sums
    and the compensator, giving the exact log-likelihood of the truncated
    kernel (``None`` means no truncation).  The exponential family ignores
    ``window``: its recursion is already O(N).

    Raises
    ------
    NonFiniteLikelihoodError
        If the intensity is not positive at some event.
    """
    log_sum, ok = log_intensity_terms(model, seq, window)
    if not ok:
        raise NonFiniteLikelihoodError(
            "conditional intensity is not positive at an observed event "
            f"(mu={model.mu!r}, kernel={model.kernel!r})"
        )
    comp = model.mu * seq.horizon
    if seq.n_events:
        remaining = seq.horizon - seq.times
        if window is not None and model.family is not Family.EXP:
            remaining = np.minimum(remaining, window)
        comp += float(np.sum(model.kernel.cumulative(remaining)))
    return LogLikelihood(log_sum - comp, seq.n_events)


def _simpson_graded(f, a, b, panels):
    """Simpson's rule for f on [a, b] after t = a + (b - a)(3v^2 - 2v^3).

    The map clusters nodes at both ends, where kernels are steep (after an
    event) or lose smoothness (the end of a finite support).
    """
    length = b - a
    v = np.linspace(0.0, 1.0, 2 * panels + 1)
    g = f(a + length * v * v * (3.0 - 2.0 * v)) * (6.0 * length * v * (1.0 - v))
    h = 1.0 / (2 * panels)
    return h / 3.0 * (g[0] + g[-1] + 4.0 * g[1:-1:2].sum() + 2.0 * g[2:-1:2].sum())


def loglikelihood_oracle(model: HawkesModel, seq: EventSequence, steps: int = 200_000) -> LogLikelihood:
    """Reference log-likelihood with the compensator integrated numerically.

    The log terms are direct sums over the full history.  By linearity the
    integral of the intensity is ``mu T`` plus, for every event, the integral
    of the kernel over ``[0, T - t_i]``.  Those kernel integrals are
    accumulated numerically between the sorted lags ``T - t_i`` with a
    composite Simpson rule graded towards both ends of each piece, so the
    grid is finest right after every event.  ``steps`` is the approximate
    total number of Simpson panels, spread over the pieces in proportion to
    their length (at least 8 per piece).
    """
    if steps < 1000:
        raise ValueError("steps must be at least 1000")
    times = seq.times
    T = seq.horizon
    kernel = model.kernel

    log_sum = 0.0
    for i, ti in enumerate(times):
        lam = model.mu + float(np.sum(kernel.evaluate(ti - times[:i]))) if i else model.mu
        if not lam > 0:
            raise NonFiniteLikelihoodError(f"conditional intensity is not positive at t={ti!r}")
        log_sum += math.log(lam)

    if times.size == 0:
        return LogLikelihood(log_sum - model.mu * T, 0)

    lags = T - times
    edges = [0.0, *np.unique(lags)]
    support_end = getattr(kernel, "support_end", math.inf)
    if support_end < edges[-1]:
        edges.append(support_end)
    edges = np.unique(edges)
    span = edges[-1]
    pieces = [0.0]
    for left, right in zip(edges[:-1], edges[1:]):
        panels = max(8, int(math.ceil(steps * (right - left) / span)))
        pieces.append(_simpson_graded(kernel.evaluate, left, right, panels))
    cumulative = np.cumsum(pieces)
    kernel_mass = math.fsum(cumulative[np.searchsorted(edges, lags)])
    return LogLikelihood(log_sum - (model.mu * T + kernel_mass), int(times.size))

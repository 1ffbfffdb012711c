"""Nelder-Mead simplex minimization.

Standard coefficients: reflection 1, expansion 2, contraction 0.5 (outside
and inside), shrink 0.5.  The search stops when the simplex is small in both
coordinates (``xtol``, max-norm distance of every vertex from the best one)
and objective values (``ftol``, spread relative to ``max(1, |f_best|)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

REFLECT, EXPAND, CONTRACT, SHRINK = 1.0, 2.0, 0.5, 0.5


@dataclass(frozen=True)
class OptimConfig:
    max_iterations: int = 2000
    xtol: float = 1e-8
    ftol: float = 1e-10
    initial_step: float = 0.1
    restart: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        for name in ("xtol", "ftol", "initial_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class OptimOutcome:
    argmin: np.ndarray
    value: float
    iterations: int
    converged: bool
    evaluations: int


def _safe(objective, x):
    value = float(objective(x))
    return value if math.isfinite(value) else math.inf


def _run(objective, x0, f0, config, callback, budget):
    n = x0.size
    simplex = np.empty((n + 1, n))
    simplex[0] = x0
    for i in range(n):
        simplex[i + 1] = x0
        simplex[i + 1, i] += config.initial_step
    values = np.empty(n + 1)
    values[0] = f0
    for i in range(1, n + 1):
        values[i] = _safe(objective, simplex[i])
    evaluations = n

    iterations = 0
    converged = False
    while iterations < budget:
        order = np.argsort(values, kind="stable")
        simplex = simplex[order]
        values = values[order]
        if callback is not None and callback(simplex[0], values[0]):
            break

        size = np.max(np.abs(simplex[1:] - simplex[0]))
        spread = np.max(np.abs(values[1:] - values[0]))
        if size <= config.xtol and spread <= config.ftol * max(1.0, abs(values[0])):
            converged = True
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + REFLECT * (centroid - worst)
        fr = _safe(objective, xr)
        evaluations += 1

        if fr < values[0]:
            xe = centroid + EXPAND * (xr - centroid)
            fe = _safe(objective, xe)
            evaluations += 1
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = centroid + CONTRACT * (xr - centroid)
            fc = _safe(objective, xc)
            evaluations += 1
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + CONTRACT * (worst - centroid)
            fc = _safe(objective, xc)
            evaluations += 1
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        for i in range(1, n + 1):
            simplex[i] = simplex[0] + SHRINK * (simplex[i] - simplex[0])
            values[i] = _safe(objective, simplex[i])
        evaluations += n

    best = int(np.argmin(values))
    return simplex[best].copy(), float(values[best]), iterations, converged, evaluations


def nelder_mead(objective, x0, config: OptimConfig | None = None, callback=None) -> OptimOutcome:
    """Minimize ``objective`` from ``x0``.

    Non-finite objective values met during the search count as ``+inf``, so
    the move that produced them is rejected.  ``callback(x_best, f_best)`` is
    called once per iteration after the vertices are sorted; a truthy return
    value stops the search (reported as not converged).

    Raises
    ------
    ValueError
        If the objective is not finite at ``x0``.
    """
    config = config or OptimConfig()
    x0 = np.array(x0, dtype=float).ravel()
    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise ValueError(f"objective is not finite at the initial point {x0.tolist()} (value {f0!r})")

    x, f, iterations, converged, evaluations = _run(
        objective, x0, f0, config, callback, config.max_iterations
    )
    evaluations += 1
    if config.restart and converged and iterations < config.max_iterations:
        x2, f2, it2, conv2, ev2 = _run(
            objective, x, f, config, callback, config.max_iterations - iterations
        )
        iterations += it2
        evaluations += ev2
        converged = conv2
        if f2 <= f:
            x, f = x2, f2
    return OptimOutcome(x, f, iterations, converged, evaluations)

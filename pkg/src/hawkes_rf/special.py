"""Principal branch of the Lambert W function on the real line."""

import math

import numpy as np

from .exceptions import ParameterDomainError

BRANCH_POINT = -1.0 / math.e
_BRANCH_SLACK = 1e-12
_MAX_ITER = 50
_STEP_TOL = 1e-14


def _initial_guess(x):
    if x < -0.25:
        # Series in p = sqrt(2 (e x + 1)) about the branch point.
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    if x < 3.0:
        return math.log1p(x)
    lx = math.log(x)
    return lx - math.log(lx)


def _lambert_w0_scalar(x):
    x = float(x)
    if math.isnan(x):
        return math.nan
    if x < BRANCH_POINT:
        if x < BRANCH_POINT - _BRANCH_SLACK:
            raise ParameterDomainError(f"lambert_w0 is undefined below -1/e, got {x!r}")
        return -1.0
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf

    w = _initial_guess(x)
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        # Halley step for f(w) = w e^w - x.
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w_new = w - step
        if w_new < -1.0:
            w_new = -1.0
        if abs(w_new - w) <= _STEP_TOL * max(abs(w_new), 1e-300):
            w = w_new
            break
        w = w_new
    return w


def lambert_w0(x):
    """Branch 0 of the Lambert W function, ``w * exp(w) = x`` with ``w >= -1``.

    Accepts a scalar or an array.  Arguments within 1e-12 below ``-1/e`` are
    clamped to the branch point; anything further below raises
    :class:`ParameterDomainError`.
    """
    if np.ndim(x) == 0:
        return _lambert_w0_scalar(x)
    arr = np.asarray(x, dtype=float)
    return np.array([_lambert_w0_scalar(v) for v in arr.ravel()]).reshape(arr.shape)

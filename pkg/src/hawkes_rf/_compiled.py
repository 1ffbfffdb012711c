"""Compiled inner loops: kernel sums over event histories and thinning.

Kernels are passed as ``(code, params)`` with the family codes of
:class:`hawkes_rf.kernels.Family` and parameters in canonical order.
"""

import math

import numpy as np
from numba import njit

EXP, PWL, QEXP, RAY = 0, 1, 2, 3
Q_UNIT_BAND = 1e-12


@njit(cache=True)
def phi(code, params, s):
    if code == EXP:
        return params[0] * math.exp(-params[1] * s)
    if code == PWL:
        denom = (s + params[1]) ** params[2]
        if 0.0 < denom < math.inf:
            return params[0] / denom
        return math.exp(math.log(params[0]) - params[2] * math.log(s + params[1]))
    if code == QEXP:
        q = params[1]
        if abs(q - 1.0) < Q_UNIT_BAND:
            return params[0] * math.exp(-s)
        base = 1.0 + (q - 1.0) * s
        if base <= 0.0:
            return 0.0
        return params[0] * base ** (1.0 / (1.0 - q))
    return params[0] * s * math.exp(-params[1] * s * s)


@njit(cache=True)
def envelope(code, params, s):
    """Non-increasing majorant of ``phi``; equal to it except for RAY before its peak."""
    if code == RAY:
        peak_t = 1.0 / math.sqrt(2.0 * params[1])
        if s <= peak_t:
            return params[0] / math.sqrt(2.0 * params[1] * math.e)
    return phi(code, params, s)


@njit(cache=True)
def log_intensity_sum(code, params, mu, times, window):
    """Sum of ``log lambda(t_i)`` over the events.

    Only events within ``window`` before ``t_i`` are summed; ``window = inf``
    gives the exact sum.  Events whose majorant has underflowed to exactly
    zero are skipped, which does not change the result.  Returns
    ``(total, ok)`` with ``ok = False`` when some intensity is not positive.
    """
    n = times.shape[0]
    total = 0.0
    if code == EXP:
        alpha = params[0]
        beta = params[1]
        decay_sum = 0.0
        for i in range(n):
            if i > 0:
                decay_sum = math.exp(-beta * (times[i] - times[i - 1])) * (1.0 + decay_sum)
            lam = mu + alpha * decay_sum
            if not lam > 0.0:
                return total, False
            total += math.log(lam)
        return total, True

    start = 0
    for i in range(n):
        ti = times[i]
        while start < i and (ti - times[start] > window or envelope(code, params, ti - times[start]) == 0.0):
            start += 1
        lam = mu
        for j in range(start, i):
            lam += phi(code, params, ti - times[j])
        if not lam > 0.0:
            return total, False
        total += math.log(lam)
    return total, True


@njit(cache=True)
def thin(code, params, mu, horizon, rng, max_events):
    """Ogata thinning on ``[0, horizon]``.

    Returns ``(times, status)``; status 0 is success and 1 means the event
    count exceeded ``max_events``.
    """
    out = np.empty(1024)
    n = 0
    t = 0.0
    start = 0
    if code == EXP:
        alpha = params[0]
        beta = params[1]
        # excitation = sum over history of alpha * exp(-beta (t - t_j)) at time t.
        excitation = 0.0
        while True:
            bound = mu + excitation
            if bound <= 0.0:
                break
            dt = rng.standard_exponential() / bound
            t += dt
            if t > horizon:
                break
            excitation *= math.exp(-beta * dt)
            if rng.random() * bound <= mu + excitation:
                if n == max_events:
                    return out[:n], 1
                if n == out.shape[0]:
                    grown = np.empty(2 * n)
                    grown[:n] = out
                    out = grown
                out[n] = t
                n += 1
                excitation += alpha
        return out[:n], 0

    # History terms below this majorant add less than one rounding unit of mu in total.
    cutoff = mu * 2.0**-53 / max_events
    bound = mu
    while True:
        if bound <= 0.0:
            break
        t += rng.standard_exponential() / bound
        if t > horizon:
            break
        while start < n and envelope(code, params, t - out[start]) <= cutoff:
            start += 1
        lam = mu
        major = mu
        for j in range(start, n):
            s = t - out[j]
            lam += phi(code, params, s)
            major += envelope(code, params, s)
        if rng.random() * bound <= lam:
            if n == max_events:
                return out[:n], 1
            if n == out.shape[0]:
                grown = np.empty(2 * n)
                grown[:n] = out
                out = grown
            out[n] = t
            n += 1
            major += envelope(code, params, 0.0)
        bound = major
    return out[:n], 0

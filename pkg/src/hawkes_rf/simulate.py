"""Seeded simulation of Hawkes event sequences by Ogata thinning.

Each sequence draws from its own PCG64 stream derived from a master seed and
an integer key, so batches are reproducible regardless of the order (or
process) in which sequences are generated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _compiled
from .events import EventSequence
from .exceptions import SimulationError
from .kernels import Exponential, Family, HawkesModel, PowerLaw, QExponential, Rayleigh

MAX_EVENTS = 10_000_000

PRESETS = {
    Family.EXP: HawkesModel(0.5, Exponential(alpha=0.06, beta=0.2)),
    Family.PWL: HawkesModel(0.5, PowerLaw(K=0.06, c=1.0, p=11.0)),
    Family.QEXP: HawkesModel(0.5, QExponential(a=0.06, q=0.5)),
    Family.RAY: HawkesModel(0.5, Rayleigh(gamma=0.06, eta=0.2)),
}


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for stream ``key`` under master ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SimulationConfig:
    model: HawkesModel
    horizon: float
    seed: int
    stream: tuple[int, ...] = ()
    allow_unstable: bool = False
    max_events: int = MAX_EVENTS

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def simulate(config: SimulationConfig) -> EventSequence:
    """Simulate one sequence on ``[0, config.horizon]``.

    Raises
    ------
    SimulationError
        If the model is not stationary and ``allow_unstable`` is off, or if
        the event count exceeds ``max_events``.
    """
    model = config.model
    ratio = model.branching_ratio()
    if ratio >= 1 and not config.allow_unstable:
        raise SimulationError(
            f"refusing to simulate a non-stationary model (branching ratio {ratio:.6g} >= 1); "
            "set allow_unstable=True to override"
        )
    rng = make_rng(config.seed, *config.stream)
    times, status = _compiled.thin(
        model.family.code,
        model.kernel.as_array(),
        model.mu,
        float(config.horizon),
        rng,
        int(config.max_events),
    )
    if status == 1:
        raise SimulationError(
            f"event count exceeded {config.max_events} before t={config.horizon}; sequence truncated"
        )
    return EventSequence(times.copy(), config.horizon)

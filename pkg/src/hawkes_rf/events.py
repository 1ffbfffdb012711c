"""Event sequences on an observation window ``[0, T]`` and their text format.

The text format is a header line ``T=<horizon>`` followed by one timestamp
per line in ascending order.  Blank lines and lines starting with ``#`` are
ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import SequenceFormatError


@dataclass(frozen=True, eq=False)
class EventSequence:
    """Strictly ascending event times observed on ``[0, horizon]``."""

    times: np.ndarray
    horizon: float

    def __post_init__(self):
        horizon = float(self.horizon)
        if not (math.isfinite(horizon) and horizon > 0):
            raise ValueError(f"horizon must be a positive finite number, got {self.horizon!r}")
        times = np.array(self.times, dtype=float).ravel()
        if times.size:
            if not np.all(np.isfinite(times)):
                raise ValueError("event times must be finite")
            if times[0] < 0 or times[-1] > horizon:
                raise ValueError(f"event times must lie in [0, {horizon}]")
            if np.any(np.diff(times) <= 0):
                raise ValueError("event times must be strictly ascending (ties are rejected)")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "horizon", horizon)

    def __len__(self):
        return self.times.size

    @property
    def n_events(self) -> int:
        return self.times.size

    def __eq__(self, other):
        if not isinstance(other, EventSequence):
            return NotImplemented
        return self.horizon == other.horizon and np.array_equal(self.times, other.times)

    __hash__ = None

    def count_before(self, t: float) -> int:
        """Number of events strictly before ``t``."""
        return int(np.searchsorted(self.times, t, side="left"))

    def to_dict(self) -> dict:
        return {"horizon": self.horizon, "times": self.times.tolist()}

    @classmethod
    def from_dict(cls, record: dict) -> "EventSequence":
        return cls(np.asarray(record["times"], dtype=float), record["horizon"])

    def to_text(self) -> str:
        lines = [f"T={self.horizon!r}"]
        lines.extend(repr(float(t)) for t in self.times)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EventSequence":
        horizon = None
        times = []
        last = -math.inf
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if horizon is None:
                if not line.startswith("T="):
                    raise SequenceFormatError(f"expected header 'T=<horizon>', got {line!r}", lineno)
                try:
                    horizon = float(line[2:])
                except ValueError:
                    raise SequenceFormatError(f"bad horizon {line[2:]!r}", lineno) from None
                if not (math.isfinite(horizon) and horizon > 0):
                    raise SequenceFormatError(f"horizon must be positive, got {line[2:]!r}", lineno)
                continue
            try:
                t = float(line)
            except ValueError:
                raise SequenceFormatError(f"bad timestamp {line!r}", lineno) from None
            if not math.isfinite(t) or t < 0 or t > horizon:
                raise SequenceFormatError(f"timestamp {line!r} outside [0, {horizon!r}]", lineno)
            if t <= last:
                raise SequenceFormatError(f"timestamp {line!r} is not strictly ascending", lineno)
            last = t
            times.append(t)
        if horizon is None:
            raise SequenceFormatError("missing header 'T=<horizon>'", 1)
        return cls(np.array(times, dtype=float), horizon)


def read_sequence(path) -> EventSequence:
    return EventSequence.from_text(Path(path).read_text())


def write_sequence(seq: EventSequence, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(seq.to_text())

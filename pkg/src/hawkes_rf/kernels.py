"""Parametric self-exciting kernels and the stationarity test.

Four families are supported::

    EXP(alpha, beta)   alpha * exp(-beta t)
    PWL(K, c, p)       K / (t + c)**p
    QEXP(a, q)         a * [1 + (q - 1) t]**(1 / (1 - q)),  a * exp(-t) at q = 1
    RAY(gamma, eta)    gamma * t * exp(-eta t**2)

For ``q < 1`` the q-exponential has finite support ``[0, 1 / (1 - q)]`` and
is zero beyond it.  Every kernel exposes its pointwise value, the closed-form
integral from 0 to ``s`` and the total mass (branching ratio).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import ClassVar

import numpy as np

from .exceptions import ParameterDomainError

# |q - 1| below this uses the exponential branch of QEXP.
Q_UNIT_BAND = 1e-12


class Family(str, Enum):
    EXP = "EXP"
    PWL = "PWL"
    QEXP = "QEXP"
    RAY = "RAY"

    @classmethod
    def parse(cls, token) -> "Family":
        """Case-insensitive lookup; accepts a ``Family`` unchanged."""
        if isinstance(token, Family):
            return token
        try:
            return cls(str(token).strip().upper())
        except ValueError:
            valid = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown kernel family {token!r} (expected one of {valid})") from None

    @property
    def code(self) -> int:
        return _FAMILY_CODES[self]

    @property
    def kernel_class(self) -> type["Kernel"]:
        return _KERNEL_CLASSES[self]


_FAMILY_CODES = {Family.EXP: 0, Family.PWL: 1, Family.QEXP: 2, Family.RAY: 3}


def _as_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise ParameterDomainError("kernel time argument must be >= 0")
    return t


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class Kernel:
    """Base class of the four kernel families.

    Subclasses are frozen dataclasses whose fields are the family parameters
    in their canonical order.
    """

    family: ClassVar[Family]
    param_names: ClassVar[tuple[str, ...]]

    def __post_init__(self):
        for name in self.param_names:
            value = getattr(self, name)
            if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, float, np.number)):
                raise ParameterDomainError(f"{self.family.value}.{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterDomainError(f"{self.family.value}.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        self._validate()

    def _validate(self):
        raise NotImplementedError

    def _require_positive(self, *names):
        for name in names:
            if not getattr(self, name) > 0:
                raise ParameterDomainError(
                    f"{self.family.value}.{name} must be > 0, got {getattr(self, name)!r}"
                )

    @property
    def params(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in self.param_names)

    def as_array(self) -> np.ndarray:
        return np.array(self.params, dtype=float)

    def replace(self, **changes) -> "Kernel":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {"family": self.family.value, "params": dict(zip(self.param_names, self.params))}

    def evaluate(self, t):
        """Kernel value at lag ``t >= 0`` (scalar or array)."""
        return _scalar_or_array(self._evaluate(_as_time(t)))

    def cumulative(self, s):
        """Integral of the kernel from 0 to ``s >= 0``, in closed form."""
        return _scalar_or_array(self._cumulative(_as_time(s)))

    def branching_ratio(self) -> float:
        """Total kernel mass, the integral over ``[0, inf)``."""
        raise NotImplementedError

    def tail_window(self, mass: float) -> float:
        """Smallest lag ``w`` such that the kernel mass beyond ``w`` is at most ``mass``."""
        raise NotImplementedError

    def envelope(self, t):
        """Smallest non-increasing function dominating the kernel."""
        return self.evaluate(t)

    def _evaluate(self, t):
        raise NotImplementedError

    def _cumulative(self, s):
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(Kernel):
    alpha: float
    beta: float

    family: ClassVar[Family] = Family.EXP
    param_names: ClassVar[tuple[str, ...]] = ("alpha", "beta")

    def _validate(self):
        self._require_positive("alpha", "beta")

    def _evaluate(self, t):
        return self.alpha * np.exp(-self.beta * t)

    def _cumulative(self, s):
        return (self.alpha / self.beta) * -np.expm1(-self.beta * s)

    def branching_ratio(self) -> float:
        return self.alpha / self.beta

    def tail_window(self, mass: float) -> float:
        total = self.branching_ratio()
        if total <= mass:
            return 0.0
        return math.log(total / mass) / self.beta


@dataclass(frozen=True)
class PowerLaw(Kernel):
    K: float
    c: float
    p: float

    family: ClassVar[Family] = Family.PWL
    param_names: ClassVar[tuple[str, ...]] = ("K", "c", "p")

    def _validate(self):
        self._require_positive("K", "c")
        if not self.p > 1:
            raise ParameterDomainError(f"PWL.p must be > 1, got {self.p!r}")

    def _evaluate(self, t):
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            denom = (t + self.c) ** self.p
            direct = self.K / denom
        ok = (denom > 0) & np.isfinite(denom)
        if np.all(ok):
            return direct
        # Huge K with huge (t + c)**p: divide in log space.
        with np.errstate(over="ignore", under="ignore"):
            logged = np.exp(math.log(self.K) - self.p * np.log(t + self.c))
        return np.where(ok, direct, logged)

    def _cumulative(self, s):
        return self.branching_ratio() * -np.expm1((1 - self.p) * np.log1p(s / self.c))

    def branching_ratio(self) -> float:
        try:
            scaled = self.c ** (1 - self.p)
        except OverflowError:
            scaled = math.inf
        if 0 < scaled < math.inf:
            value = self.K * scaled / (self.p - 1)
            if 0 < value < math.inf:
                return value
        log_value = math.log(self.K) + (1 - self.p) * math.log(self.c) - math.log(self.p - 1)
        return math.exp(log_value) if log_value < 709.0 else math.inf

    def tail_window(self, mass: float) -> float:
        if self.branching_ratio() <= mass:
            return 0.0
        # K / (p - 1) * (w + c)**(1 - p) = mass
        log_w_plus_c = (math.log(self.K) - math.log((self.p - 1) * mass)) / (self.p - 1)
        if log_w_plus_c > 700:
            return math.inf
        return max(math.exp(log_w_plus_c) - self.c, 0.0)


@dataclass(frozen=True)
class QExponential(Kernel):
    a: float
    q: float

    family: ClassVar[Family] = Family.QEXP
    param_names: ClassVar[tuple[str, ...]] = ("a", "q")

    def _validate(self):
        self._require_positive("a")
        if not self.q < 2:
            raise ParameterDomainError(f"QEXP.q must be < 2, got {self.q!r}")

    @property
    def is_exponential(self) -> bool:
        return abs(self.q - 1) < Q_UNIT_BAND

    @property
    def support_end(self) -> float:
        """Right end of the support; finite only for ``q < 1``."""
        if self.q < 1 and not self.is_exponential:
            return 1.0 / (1.0 - self.q)
        return math.inf

    def _evaluate(self, t):
        if self.is_exponential:
            return self.a * np.exp(-t)
        base = np.maximum(1 + (self.q - 1) * t, 0.0)
        with np.errstate(divide="ignore"):
            return self.a * base ** (1 / (1 - self.q))

    def _cumulative(self, s):
        if self.is_exponential:
            return self.a * -np.expm1(-s)
        s = np.minimum(s, self.support_end)
        power = (2 - self.q) / (1 - self.q)
        with np.errstate(divide="ignore"):
            log_base = np.log1p((self.q - 1) * s)
        return self.a / (2 - self.q) * -np.expm1(power * log_base)

    def branching_ratio(self) -> float:
        return self.a / (2 - self.q)

    def tail_window(self, mass: float) -> float:
        total = self.branching_ratio()
        if total <= mass:
            return 0.0
        if self.is_exponential:
            return math.log(self.a / mass)
        if self.q < 1:
            # Mass beyond w is total * base(w)**power with power > 0.
            power = (2 - self.q) / (1 - self.q)
            base = (mass / total) ** (1 / power)
            return (1 - base) / (1 - self.q)
        log_base = (1 - self.q) / (2 - self.q) * math.log(mass / total)
        if log_base > 700:
            return math.inf
        return math.expm1(log_base) / (self.q - 1)


@dataclass(frozen=True)
class Rayleigh(Kernel):
    gamma: float
    eta: float

    family: ClassVar[Family] = Family.RAY
    param_names: ClassVar[tuple[str, ...]] = ("gamma", "eta")

    def _validate(self):
        self._require_positive("gamma", "eta")

    @property
    def peak_time(self) -> float:
        return 1.0 / math.sqrt(2 * self.eta)

    @property
    def peak_value(self) -> float:
        return self.gamma / math.sqrt(2 * self.eta * math.e)

    def _evaluate(self, t):
        return self.gamma * t * np.exp(-self.eta * t * t)

    def _cumulative(self, s):
        return self.gamma / (2 * self.eta) * -np.expm1(-self.eta * s * s)

    def branching_ratio(self) -> float:
        return self.gamma / (2 * self.eta)

    def tail_window(self, mass: float) -> float:
        total = self.branching_ratio()
        if total <= mass:
            return 0.0
        return math.sqrt(math.log(total / mass) / self.eta)

    def envelope(self, t):
        t = _as_time(t)
        out = np.where(t <= self.peak_time, self.peak_value, self._evaluate(t))
        return _scalar_or_array(out)


_KERNEL_CLASSES = {
    Family.EXP: Exponential,
    Family.PWL: PowerLaw,
    Family.QEXP: QExponential,
    Family.RAY: Rayleigh,
}


def make_kernel(family, *args, **kwargs) -> Kernel:
    return Family.parse(family).kernel_class(*args, **kwargs)


def kernel_from_dict(record: dict) -> Kernel:
    """Inverse of :meth:`Kernel.to_dict`."""
    try:
        family = Family.parse(record["family"])
        params = record["params"]
    except (KeyError, TypeError):
        raise ParameterDomainError(f"kernel record needs 'family' and 'params': {record!r}") from None
    cls = family.kernel_class
    expected = {f.name for f in fields(cls)}
    if set(params) != expected:
        raise ParameterDomainError(
            f"{family.value} expects parameters {sorted(expected)}, got {sorted(params)}"
        )
    return cls(**params)


@dataclass(frozen=True)
class HawkesModel:
    """Constant background rate ``mu`` plus a self-exciting kernel."""

    mu: float
    kernel: Kernel

    def __post_init__(self):
        if not isinstance(self.kernel, Kernel):
            raise ParameterDomainError(f"kernel must be a Kernel instance, got {self.kernel!r}")
        mu = float(self.mu)
        if not (math.isfinite(mu) and mu >= 0):
            raise ParameterDomainError(f"mu must be finite and >= 0, got {self.mu!r}")
        object.__setattr__(self, "mu", mu)

    @property
    def family(self) -> Family:
        return self.kernel.family

    def branching_ratio(self) -> float:
        return self.kernel.branching_ratio()

    def to_dict(self) -> dict:
        return {"mu": self.mu, **self.kernel.to_dict()}

    @classmethod
    def from_dict(cls, record: dict) -> "HawkesModel":
        return cls(record["mu"], kernel_from_dict(record))


@dataclass(frozen=True)
class StabilityReport:
    branching_ratio: float
    stationary: bool
    steady_rate: float | None = None


def stability(model: HawkesModel) -> StabilityReport:
    """Branching ratio, stationarity flag and long-run event rate ``mu / (1 - ratio)``."""
    ratio = model.branching_ratio()
    if ratio < 1:
        return StabilityReport(ratio, True, model.mu / (1 - ratio))
    return StabilityReport(ratio, False, None)

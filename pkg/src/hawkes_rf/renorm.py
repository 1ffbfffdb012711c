"""Renormalization factors: project a kernel onto branching ratio 1/(1+eps).

Write ``R = ||phi|| (1 + eps)`` for the current branching ratio ``||phi||``.
A single-parameter factor divides the ratio by ``R`` through one parameter;
a joint factor splits the correction as ``sqrt(R)`` over two parameters.
In every case the background rate is reset to ``lambda_hat * eps / (1 + eps)``
with ``lambda_hat = N / T``, so the implied long-run rate of the renormalized
model equals the empirical rate of the sequence.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from .events import EventSequence
from .exceptions import InfeasibleRenormalization, ParameterDomainError
from .kernels import Family, HawkesModel, Kernel
from .special import BRANCH_POINT, lambert_w0

log = logging.getLogger(__name__)

# Below this |log c| the power-law exponent update uses the series of W(y)/y.
LOG_C_SINGULAR = 1e-8


class Strategy(str, Enum):
    OVER_ALPHA = "OverAlpha"
    OVER_BETA = "OverBeta"
    JOINT_ALPHA_BETA = "JointAlphaBeta"
    OVER_K = "OverK"
    OVER_C = "OverC"
    OVER_P = "OverP"
    JOINT_K_C = "JointKC"
    JOINT_K_P = "JointKP"
    OVER_A = "OverA"
    OVER_Q = "OverQ"
    JOINT_A_Q = "JointAQ"
    OVER_GAMMA = "OverGamma"
    OVER_ETA = "OverEta"
    JOINT_GAMMA_ETA = "JointGammaEta"

    @property
    def family(self) -> Family:
        for family, members in STRATEGIES.items():
            if self in members:
                return family
        raise AssertionError(self)

    @property
    def index(self) -> int:
        """Position within the family's strategy list (used for tie-breaking)."""
        return STRATEGIES[self.family].index(self)


STRATEGIES = {
    Family.EXP: (Strategy.OVER_ALPHA, Strategy.OVER_BETA, Strategy.JOINT_ALPHA_BETA),
    Family.PWL: (Strategy.OVER_K, Strategy.OVER_C, Strategy.OVER_P, Strategy.JOINT_K_C, Strategy.JOINT_K_P),
    Family.QEXP: (Strategy.OVER_A, Strategy.OVER_Q, Strategy.JOINT_A_Q),
    Family.RAY: (Strategy.OVER_GAMMA, Strategy.OVER_ETA, Strategy.JOINT_GAMMA_ETA),
}


@dataclass(frozen=True)
class RenormResult:
    model: HawkesModel
    strategy: Strategy
    epsilon: float
    achieved_ratio: float
    flags: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "epsilon": self.epsilon,
            "mu": self.model.mu,
            "params": self.model.kernel.to_dict()["params"],
            "achieved_ratio": self.achieved_ratio,
        }


def lambda_hat(seq: EventSequence) -> float:
    """Empirical event rate ``N / T``."""
    if not seq.horizon > 0:
        raise ValueError("horizon must be positive")
    return seq.n_events / seq.horizon


def renormalized_mu(rate: float, epsilon: float) -> float:
    """Background rate ``rate * (1 - 1/(1+eps))`` paired with a kernel of ratio 1/(1+eps)."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon!r}")
    return rate * (1.0 - 1.0 / (1.0 + epsilon))


def _w_over_y(y: float) -> float:
    """``W0(y) / y``, including the removable singularity at ``y = 0``."""
    if abs(y) < 1e-6:
        return 1.0 - y + 1.5 * y * y - (8.0 / 3.0) * y ** 3
    return lambert_w0(y) / y


def power_law_exponent(delta: float, c: float) -> float:
    """Exponent ``p' > 1`` solving ``(p' - 1) c**(p' - 1) = delta``.

    Uses ``p' = 1 + W0(delta log c) / log c``; as ``c -> 1`` this tends to
    ``1 + delta`` and the series of ``W0(y)/y`` is used instead.
    """
    log_c = math.log(c)
    y = delta * log_c
    if y < BRANCH_POINT:
        raise InfeasibleRenormalization(
            f"no exponent solves (p-1) c^(p-1) = {delta:.6g} with c = {c:.6g}: "
            f"delta*log(c) = {y:.6g} is below -1/e"
        )
    if abs(log_c) < LOG_C_SINGULAR:
        p_new = 1.0 + delta * _w_over_y(y)
    else:
        p_new = 1.0 + lambert_w0(y) / log_c
    if not (math.isfinite(p_new) and p_new > 1.0):
        raise InfeasibleRenormalization(f"renormalized exponent p'={p_new!r} is not > 1")
    return p_new


def renormalize_kernel(kernel: Kernel, strategy: Strategy, epsilon: float) -> Kernel:
    """Kernel with branching ratio ``1/(1+eps)`` obtained by ``strategy``."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon!r}")
    strategy = Strategy(strategy)
    if strategy.family is not kernel.family:
        raise ValueError(f"strategy {strategy.value} does not apply to {kernel.family.value} kernels")
    R = kernel.branching_ratio() * (1.0 + epsilon)
    root = math.sqrt(R)
    k = kernel

    if strategy is Strategy.OVER_ALPHA:
        return k.replace(alpha=k.alpha / R)
    if strategy is Strategy.OVER_BETA:
        return k.replace(beta=k.beta * R)
    if strategy is Strategy.JOINT_ALPHA_BETA:
        return k.replace(alpha=k.alpha / root, beta=k.beta * root)

    if strategy is Strategy.OVER_K:
        return k.replace(K=k.K / R)
    if strategy is Strategy.OVER_C:
        return k.replace(c=k.c * R ** (1.0 / (k.p - 1.0)))
    if strategy is Strategy.OVER_P:
        delta = R * (k.p - 1.0) * k.c ** (k.p - 1.0)
        return k.replace(p=power_law_exponent(delta, k.c))
    if strategy is Strategy.JOINT_K_C:
        return k.replace(K=k.K / root, c=k.c * root ** (1.0 / (k.p - 1.0)))
    if strategy is Strategy.JOINT_K_P:
        delta = root * (k.p - 1.0) * k.c ** (k.p - 1.0)
        return k.replace(K=k.K / root, p=power_law_exponent(delta, k.c))

    if strategy is Strategy.OVER_A:
        return k.replace(a=k.a / R)
    if strategy is Strategy.OVER_Q:
        q_new = 2.0 - (2.0 - k.q) * R
        assert q_new < 2.0
        return k.replace(q=q_new)
    if strategy is Strategy.JOINT_A_Q:
        q_new = 2.0 - (2.0 - k.q) * root
        assert q_new < 2.0
        return k.replace(a=k.a / root, q=q_new)

    if strategy is Strategy.OVER_GAMMA:
        return k.replace(gamma=k.gamma / R)
    if strategy is Strategy.OVER_ETA:
        return k.replace(eta=k.eta * R)
    if strategy is Strategy.JOINT_GAMMA_ETA:
        return k.replace(gamma=k.gamma / root, eta=k.eta * root)
    raise AssertionError(strategy)


def renormalize(kernel: Kernel, strategy: Strategy, epsilon: float, rate: float) -> RenormResult:
    """Renormalized model for one strategy, with ``mu`` reset from the empirical ``rate``.

    Raises
    ------
    InfeasibleRenormalization
        For the power-law exponent strategies when no exponent ``p' > 1`` exists.
    """
    try:
        new_kernel = renormalize_kernel(kernel, strategy, epsilon)
    except (OverflowError, ParameterDomainError) as exc:
        raise InfeasibleRenormalization(f"{Strategy(strategy).value}: {exc}") from exc
    flags = []
    if kernel.family is Family.QEXP and (kernel.q < 1) != (new_kernel.q < 1):
        flags.append("qexp-support-regime-change")
    model = HawkesModel(renormalized_mu(rate, epsilon), new_kernel)
    return RenormResult(model, Strategy(strategy), float(epsilon), new_kernel.branching_ratio(), tuple(flags))


def enumerate_candidates(model: HawkesModel, seq: EventSequence, epsilon: float) -> list[RenormResult]:
    """All feasible renormalizations of ``model``'s kernel, in strategy order."""
    rate = lambda_hat(seq)
    out = []
    for strategy in STRATEGIES[model.family]:
        try:
            out.append(renormalize(model.kernel, strategy, epsilon, rate))
        except InfeasibleRenormalization as exc:
            log.info("skipping %s (eps=%g): %s", strategy.value, epsilon, exc)
    return out

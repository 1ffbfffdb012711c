"""Hawkes-process kernels, maximum-likelihood fitting and renormalization factors."""

__version__ = "0.1.0"

from .events import EventSequence, read_sequence, write_sequence
from .exceptions import (
    FitError,
    InfeasibleRenormalization,
    NonFiniteLikelihoodError,
    ParameterDomainError,
    SequenceFormatError,
    SimulationError,
)
from .fit import FitResult, WindowRule, default_init, mle_fit, rf_mle_fit, select_renormalized
from .kernels import (
    Exponential,
    Family,
    HawkesModel,
    PowerLaw,
    QExponential,
    Rayleigh,
    StabilityReport,
    kernel_from_dict,
    make_kernel,
    stability,
)
from .likelihood import LogLikelihood, intensity_at, loglikelihood, loglikelihood_oracle
from .optim import OptimConfig, OptimOutcome, nelder_mead
from .renorm import (
    STRATEGIES,
    RenormResult,
    Strategy,
    enumerate_candidates,
    lambda_hat,
    renormalize,
    renormalized_mu,
)
from .simulate import PRESETS, SimulationConfig, simulate
from .special import lambert_w0

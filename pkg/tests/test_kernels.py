import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hawkes_rf import (
    Exponential,
    Family,
    HawkesModel,
    ParameterDomainError,
    PowerLaw,
    QExponential,
    Rayleigh,
    kernel_from_dict,
    make_kernel,
    stability,
)
from oracles import integrate, kernel_mass, pointwise

PRESET_KERNELS = [
    (Exponential(0.06, 0.2), 0.3),
    (PowerLaw(0.06, 1.0, 11.0), 0.006),
    (QExponential(0.06, 0.5), 0.04),
    (Rayleigh(0.06, 0.2), 0.15),
]


def time_scale(kernel):
    if kernel.family is Family.EXP:
        return 1.0 / kernel.beta
    if kernel.family is Family.PWL:
        return kernel.c
    if kernel.family is Family.RAY:
        return 1.0 / math.sqrt(kernel.eta)
    return 1.0


def random_kernel(family, rng):
    if family == "EXP":
        return Exponential(rng.uniform(0.01, 3), rng.uniform(0.05, 5))
    if family == "PWL":
        return PowerLaw(rng.uniform(0.01, 3), rng.uniform(0.1, 5), rng.uniform(1.2, 6))
    if family == "QEXP":
        return QExponential(rng.uniform(0.01, 3), rng.uniform(-1, 1.8))
    return Rayleigh(rng.uniform(0.01, 3), rng.uniform(0.05, 5))


@pytest.mark.parametrize("kernel,ratio", PRESET_KERNELS, ids=lambda v: getattr(v, "family", ""))
def test_preset_branching_ratio_matches_quadrature(kernel, ratio):
    assert kernel.branching_ratio() == pytest.approx(ratio, rel=1e-12)
    mass = kernel_mass(kernel.family.value, [kernel.params], time_scale(kernel))[0]
    assert abs(mass - ratio) < 1e-9


@pytest.mark.parametrize("family", ["EXP", "PWL", "QEXP", "RAY"])
def test_branching_ratio_random_kernels(family):
    rng = np.random.default_rng(11)
    kernels = [random_kernel(family, rng) for _ in range(200)]
    masses = kernel_mass(family, [k.params for k in kernels], [time_scale(k) for k in kernels])
    for k, m in zip(kernels, masses):
        r = k.branching_ratio()
        assert abs(r - m) <= 1e-6 * (1 + r), k


def test_pointwise_reference_agrees_with_evaluate():
    rng = np.random.default_rng(3)
    t = np.linspace(0, 20, 401)
    for family in ["EXP", "PWL", "QEXP", "RAY"]:
        for _ in range(20):
            k = random_kernel(family, rng)
            ref = pointwise(family, [k.params])(np.zeros(t.size, int), t)
            np.testing.assert_allclose(k.evaluate(t), ref, rtol=1e-13, atol=1e-300)


def test_ray_cumulative_example():
    k = Rayleigh(0.06, 0.2)
    expected = 0.15 * (1 - math.exp(-0.2))
    assert k.cumulative(1.0) == pytest.approx(expected, rel=1e-14)
    quad = integrate(lambda t: 0.06 * t * np.exp(-0.2 * t * t), 0.0, 1.0)
    assert abs(k.cumulative(1.0) - quad) < 1e-10
    assert k.cumulative(1.0) == pytest.approx(0.0271904, abs=5e-8)


@pytest.mark.parametrize("kernel", [k for k, _ in PRESET_KERNELS], ids=str)
def test_cumulative_zero_and_limit(kernel):
    assert kernel.cumulative(0.0) == 0.0
    far = 1e6 * time_scale(kernel)
    if kernel.family is Family.PWL:
        assert kernel.cumulative(far) == pytest.approx(kernel.branching_ratio(), rel=1e-6)
    else:
        assert kernel.cumulative(far) == pytest.approx(kernel.branching_ratio(), rel=1e-12)


@pytest.mark.parametrize("family", ["EXP", "PWL", "QEXP", "RAY"])
def test_cumulative_matches_quadrature_and_is_monotone(family):
    rng = np.random.default_rng(5)
    for _ in range(20):
        k = random_kernel(family, rng)
        s = np.sort(rng.uniform(0, 10 * time_scale(k), 6))
        values = k.cumulative(s)
        assert np.all(np.diff(values) >= 0)
        for si, vi in zip(s, values):
            quad = integrate(lambda t: k.evaluate(t), 0.0, si)
            assert abs(vi - quad) <= 1e-9 * (1 + abs(vi))


@pytest.mark.parametrize("family", ["EXP", "PWL", "QEXP", "RAY"])
def test_cumulative_derivative_is_kernel(family):
    rng = np.random.default_rng(8)
    for _ in range(30):
        k = random_kernel(family, rng)
        s = rng.uniform(0.05, 5) * time_scale(k)
        if k.family is Family.QEXP and k.support_end < math.inf:
            if abs(s - k.support_end) < 0.05 * k.support_end:
                continue
        value = k.evaluate(s)
        for h in (1e-4 * time_scale(k), 1e-5 * time_scale(k)):
            fd = (k.cumulative(s + h) - k.cumulative(s - h)) / (2 * h)
            # Second term: round-off floor of differencing values of size ||phi||.
            assert abs(fd - value) <= 1e-5 * abs(value) + 1e-9 * k.branching_ratio() / time_scale(k)


@settings(max_examples=200, deadline=None)
@given(
    a=st.floats(0.001, 10),
    q=st.floats(-3, 0.999),
    t=st.floats(0, 50),
)
def test_qexp_zero_beyond_support(a, q, t):
    k = QExponential(a, q)
    end = k.support_end
    value = float(k.evaluate(end + t + 1e-9))
    assert value == 0.0
    assert float(k.cumulative(end + t)) == pytest.approx(k.branching_ratio(), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    family=st.sampled_from(["EXP", "PWL", "QEXP", "RAY"]),
    seed=st.integers(0, 2**32 - 1),
    t=st.floats(0, 1e3),
)
def test_evaluate_nonnegative(family, seed, t):
    k = random_kernel(family, np.random.default_rng(seed))
    assert k.evaluate(t) >= 0


def test_qexp_unit_band_is_exponential():
    k1 = QExponential(0.3, 1.0)
    k2 = QExponential(0.3, 1.0 + 1e-13)
    assert k1.is_exponential and k2.is_exponential
    assert k1.evaluate(2.0) == pytest.approx(0.3 * math.exp(-2.0), rel=1e-15)
    assert k1.branching_ratio() == pytest.approx(0.3, rel=1e-15)
    assert k1.cumulative(2.0) == pytest.approx(0.3 * (1 - math.exp(-2.0)), rel=1e-14)


def test_qexp_continuous_across_unit():
    below, above, at = QExponential(0.3, 1 - 1e-7), QExponential(0.3, 1 + 1e-7), QExponential(0.3, 1.0)
    for t in (0.5, 2.0, 7.0):
        assert below.evaluate(t) == pytest.approx(at.evaluate(t), rel=1e-5)
        assert above.evaluate(t) == pytest.approx(at.evaluate(t), rel=1e-5)
        assert below.cumulative(t) == pytest.approx(at.cumulative(t), rel=1e-5)


@pytest.mark.parametrize(
    "family,params",
    [
        ("EXP", (-0.1, 1.0)),
        ("EXP", (0.1, 0.0)),
        ("PWL", (0.1, 1.0, 1.0)),
        ("PWL", (0.1, 0.0, 2.0)),
        ("QEXP", (0.1, 2.0)),
        ("QEXP", (-0.1, 1.5)),
        ("RAY", (0.1, 0.0)),
        ("EXP", (math.nan, 1.0)),
        ("RAY", (math.inf, 1.0)),
    ],
)
def test_invalid_parameters_rejected(family, params):
    with pytest.raises(ParameterDomainError):
        make_kernel(family, *params)


def test_negative_time_rejected():
    with pytest.raises(ParameterDomainError):
        Exponential(0.1, 1.0).cumulative(-1.0)
    with pytest.raises(ParameterDomainError):
        Exponential(0.1, 1.0).evaluate(-1.0)


def test_stability_examples():
    report = stability(HawkesModel(0.5, Exponential(0.06, 0.2)))
    assert report.stationary
    assert report.branching_ratio == pytest.approx(0.3)
    assert report.steady_rate == pytest.approx(0.714286, abs=1e-6)

    report = stability(HawkesModel(0.5, Exponential(0.5, 0.2)))
    assert not report.stationary
    assert report.branching_ratio == pytest.approx(2.5)
    assert report.steady_rate is None

    assert stability(HawkesModel(0.0, Rayleigh(0.06, 0.2))).steady_rate == 0.0


def test_serialization_round_trip():
    for kernel, _ in PRESET_KERNELS:
        record = kernel.to_dict()
        assert record["family"] == kernel.family.value
        assert kernel_from_dict(record) == kernel
    model = HawkesModel(0.5, PowerLaw(0.06, 1.0, 11.0))
    assert HawkesModel.from_dict(model.to_dict()) == model


def test_family_parse_case_insensitive():
    assert Family.parse("exp") is Family.EXP
    assert Family.parse("Qexp") is Family.QEXP
    with pytest.raises(ValueError):
        Family.parse("gauss")


def test_rayleigh_envelope_dominates():
    k = Rayleigh(0.7, 0.3)
    t = np.linspace(0, 10, 2001)
    env = k.envelope(t)
    assert np.all(env >= k.evaluate(t))
    assert np.all(np.diff(env) <= 0)
    assert k.peak_value == pytest.approx(float(k.evaluate(k.peak_time)), rel=1e-14)


@pytest.mark.parametrize("family", ["EXP", "PWL", "QEXP", "RAY"])
def test_tail_window_leaves_requested_mass(family):
    rng = np.random.default_rng(21)
    for _ in range(50):
        k = random_kernel(family, rng)
        w = k.tail_window(1e-6)
        beyond = k.branching_ratio() - k.cumulative(w)
        assert beyond <= 1e-6 * (1 + 1e-6) + 1e-15
        assert beyond >= 1e-6 * (1 - 1e-4)


def test_power_law_extreme_parameters_stay_finite():
    # Fits drifting towards the exponential limit reach K far beyond c**p in magnitude.
    k = PowerLaw(1e300, 81.0, 200.0)
    log_ratio = math.log(1e300) - 199 * math.log(81.0) - math.log(199.0)
    assert k.branching_ratio() == pytest.approx(math.exp(log_ratio), rel=1e-12)
    t = np.array([0.0, 10.0, 50.0])
    expected = np.exp(math.log(1e300) - 200 * np.log(t + 81.0))
    np.testing.assert_allclose(k.evaluate(t), expected, rtol=1e-12)
    assert k.cumulative(1e12) == pytest.approx(k.branching_ratio(), rel=1e-12)
    assert math.isfinite(k.tail_window(1e-10))

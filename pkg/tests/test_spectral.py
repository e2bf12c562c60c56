import itertools

import numpy as np
import pytest

from riskcloud.spectral import (
    CVaR,
    Constant,
    Linear,
    PiecewiseConstant,
    QuadraticOffset,
    bin_weights,
    risk_value_and_weights,
    spectral_from_config,
)


def all_variants():
    return [
        Constant(),
        CVaR(0.5),
        CVaR(0.25),
        CVaR(1.0),
        Linear(),
        QuadraticOffset(0.1),
        QuadraticOffset(1.3),
        PiecewiseConstant([0.0, 0.4, 0.8, 1.0], [0.25, 1.0, 2.5]),
    ]


def brute_force_risk(alpha, values):
    """Independent oracle: maximum of sum(p[pi(i)] * values[i]) over permutations."""
    n = len(values)
    p = bin_weights(alpha, n)
    return max(sum(p[pi[i]] * values[i] for i in range(n)) for pi in itertools.permutations(range(n)))


def test_bin_weights_frozen_cases():
    assert np.allclose(bin_weights(Constant(), 4), [0.25, 0.25, 0.25, 0.25], atol=1e-15)
    assert np.allclose(bin_weights(CVaR(0.5), 4), [0.0, 0.0, 0.5, 0.5], atol=1e-15)
    # integral of 2t over each half of (0,1)
    assert np.allclose(bin_weights(Linear(), 2), [0.25, 0.75], atol=1e-15)


@pytest.mark.parametrize("alpha", all_variants(), ids=lambda a: type(a).__name__ + str(a.__dict__))
@pytest.mark.parametrize("n", [1, 2, 3, 7, 50])
def test_bin_weights_monotone_and_normalized(alpha, n):
    p = bin_weights(alpha, n)
    assert len(p) == n
    assert np.all(p >= 0.0)
    assert np.all(np.diff(p) >= -1e-14)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha", all_variants(), ids=lambda a: type(a).__name__ + str(a.__dict__))
def test_bin_weights_match_pointwise_integral(alpha):
    # numerical integral of the weight over each bin
    n = 9
    p = bin_weights(alpha, n)
    ts = np.linspace(0, 1, 20001)[1:-1]
    vals = np.asarray(alpha(ts))
    for k in range(n):
        mask = (ts > k / n) & (ts < (k + 1) / n)
        approx = np.trapezoid(vals[mask], ts[mask])
        assert p[k] == pytest.approx(approx, abs=5e-4)


def test_risk_frozen_examples():
    value, w = risk_value_and_weights(Constant(), [3.0, 1.0, 2.0])
    assert value == pytest.approx(2.0, abs=1e-15)
    assert np.allclose(w, [1 / 3, 1 / 3, 1 / 3])

    value, w = risk_value_and_weights(CVaR(0.5), [1.0, 2.0, 3.0, 4.0])
    assert value == pytest.approx(3.5, abs=1e-15)
    assert np.allclose(w, [0.0, 0.0, 0.5, 0.5])

    # brute force over the two permutations confirms the sorted pairing
    assert brute_force_risk(Linear(), [1.0, 2.0]) == pytest.approx(1.75, abs=1e-15)
    value, w = risk_value_and_weights(Linear(), [1.0, 2.0])
    assert value == pytest.approx(1.75, abs=1e-15)
    assert np.allclose(w, [0.25, 0.75])


@pytest.mark.parametrize("alpha", all_variants(), ids=lambda a: type(a).__name__ + str(a.__dict__))
def test_rearrangement_maximality(alpha):
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(1, 7))
        values = rng.normal(size=n) * 10.0
        value, _ = risk_value_and_weights(alpha, values)
        assert value == pytest.approx(brute_force_risk(alpha, values), abs=1e-12)


@pytest.mark.parametrize("alpha", all_variants(), ids=lambda a: type(a).__name__ + str(a.__dict__))
def test_translation_equivariance(alpha):
    rng = np.random.default_rng(8)
    values = rng.normal(size=9)
    base, _ = risk_value_and_weights(alpha, values)
    for t in (-3.0, 0.1, 42.0):
        shifted, _ = risk_value_and_weights(alpha, values + t)
        assert shifted == pytest.approx(base + t, abs=1e-12)


@pytest.mark.parametrize("alpha", all_variants(), ids=lambda a: type(a).__name__ + str(a.__dict__))
def test_monotonicity(alpha):
    rng = np.random.default_rng(9)
    for _ in range(20):
        values = rng.normal(size=6)
        bump = np.zeros(6)
        bump[rng.integers(6)] = abs(rng.normal())
        lo, _ = risk_value_and_weights(alpha, values)
        hi, _ = risk_value_and_weights(alpha, values + bump)
        assert hi >= lo - 1e-12


def test_constant_is_mean():
    rng = np.random.default_rng(10)
    values = rng.normal(size=13)
    value, w = risk_value_and_weights(Constant(), values)
    assert value == pytest.approx(values.mean(), abs=1e-14)
    assert np.allclose(w, 1.0 / 13.0)


def test_weights_report_received_bin():
    values = np.array([5.0, -1.0, 2.0])
    _, w = risk_value_and_weights(Linear(), values)
    p = bin_weights(Linear(), 3)
    assert w[1] == p[0] and w[2] == p[1] and w[0] == p[2]


def test_stable_ties():
    _, w = risk_value_and_weights(Linear(), [1.0, 1.0, 1.0])
    p = bin_weights(Linear(), 3)
    assert np.array_equal(w, p)  # original index order on ties


def test_nan_rejected():
    with pytest.raises(ValueError):
        risk_value_and_weights(Constant(), [1.0, np.nan])


def test_piecewise_validation():
    with pytest.raises(ValueError):
        PiecewiseConstant([0.0, 0.5, 1.0], [2.0, 0.0])  # decreasing
    with pytest.raises(ValueError):
        PiecewiseConstant([0.0, 0.5, 1.0], [0.5, 0.5])  # integral != 1
    with pytest.raises(ValueError):
        PiecewiseConstant([0.1, 1.0], [1.0])  # does not start at 0
    pc = PiecewiseConstant([0.0, 0.5, 1.0], [0.5, 1.5])
    assert pc(0.25) == 0.5 and pc(0.75) == 1.5


def test_cvar_level_validation():
    with pytest.raises(ValueError):
        CVaR(0.0)
    with pytest.raises(ValueError):
        CVaR(1.5)


def test_from_config():
    assert isinstance(spectral_from_config({"variant": "cvar", "m": 0.4}), CVaR)
    assert isinstance(spectral_from_config({"variant": "linear"}), Linear)
    with pytest.raises(ValueError):
        spectral_from_config({"variant": "cubic"})


def test_quadratic_offset_shape():
    alpha = QuadraticOffset(0.1)
    assert alpha(0.0) == pytest.approx(0.0, abs=1e-15)
    ts = np.linspace(0.0, 1.0, 1001)
    vals = np.asarray(alpha(ts))
    assert np.all(np.diff(vals) > 0.0)
    assert np.trapezoid(vals, ts) == pytest.approx(1.0, abs=1e-6)

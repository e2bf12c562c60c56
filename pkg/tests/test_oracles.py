import numpy as np
import pytest

from riskcloud.costs import CoordinateSum, Negated, ProductCost
from riskcloud.measures import PowerLaw, Triangular, Uniform
from riskcloud.minflow import min_cost_partial_assignment
from riskcloud.oracles import (
    block_approximation_cost,
    brute_force_mmot,
    comonotone_points,
    fit_rate,
    flow_partial_ot_oracle,
    quantize_1d,
    reference_value,
    restriction_quantization,
)
from riskcloud.sdot import balanced_value_grad
from riskcloud.spectral import CVaR, Constant, Linear, risk_value_and_weights


def test_comonotone_frozen_cases():
    u = Uniform(0, 1)
    cloud = comonotone_points([u, u], 2)
    assert np.allclose(cloud.positions, [[0.25, 0.25], [0.75, 0.75]])
    cloud = comonotone_points([Uniform(0, 2), Triangular(0, 1, 2)], 1)
    assert np.allclose(cloud.positions, [[1.0, 1.0]])
    cloud = comonotone_points([u, u], 2, flips=[False, True])
    assert np.allclose(cloud.positions, [[0.25, 0.75], [0.75, 0.25]])


def test_comonotone_barycenter_placement():
    u = Uniform(0, 1)
    cloud = comonotone_points([u, u], 4, placement="barycenter")
    atoms = quantize_1d(u, 4).atoms
    assert np.allclose(cloud.positions[:, 0], atoms)


def test_reference_values():
    u = Uniform(0, 1)
    assert reference_value(CoordinateSum(), Constant(), [u, u]) == pytest.approx(1.0, abs=1e-10)
    assert reference_value(ProductCost(), Constant(), [u, u]) == pytest.approx(1 / 3, abs=1e-10)
    # tail-weighted sum: 2 * int_{1/2}^1 2t dt = 1.5, cross-checked by a
    # 10^6-sample Monte Carlo draw of the monotone coupling
    val = reference_value(CoordinateSum(), CVaR(0.5), [u, u])
    assert val == pytest.approx(1.5, abs=1e-9)
    rng = np.random.default_rng(0)
    t = rng.random(10**6)
    mc = np.mean(2 * t * np.where(t > 0.5, 2.0, 0.0))
    assert val == pytest.approx(mc, abs=5e-3)
    # linear-weight product cost: int 2t^3 dt = 1/2
    assert reference_value(ProductCost(), Linear(), [u, u]) == pytest.approx(0.5, abs=1e-10)


def test_quantize_frozen_cases():
    u = Uniform(0, 1)
    q = quantize_1d(u, 1)
    assert q.atoms[0] == pytest.approx(0.5, abs=1e-14)
    assert q.error == pytest.approx(1 / np.sqrt(12), abs=1e-12)
    q = quantize_1d(u, 4)
    assert q.error == pytest.approx(1 / (2 * np.sqrt(3) * 4), abs=1e-12)


def test_quantize_powerlaw_against_discrete_oracle():
    rho = PowerLaw(2)
    n = 16
    q = quantize_1d(rho, n)
    # discrete oracle: 1e5 equal-mass atoms, grouped into the same n blocks
    m = 100_000
    atoms = rho.quantile_grid((np.arange(m) + 0.5) / m)
    groups = atoms.reshape(n, m // n)
    centers = groups.mean(axis=1)
    e2 = np.mean((groups - centers[:, None]) ** 2)
    assert q.error == pytest.approx(np.sqrt(e2), rel=1e-3)
    assert np.all(np.diff(q.atoms) > 0.0)


def test_restriction_quantization():
    u = Uniform(0, 1)
    r = restriction_quantization(u, 0.5, 4, side="left")
    assert r.error == pytest.approx(0.5 / (2 * np.sqrt(3) * 4), abs=1e-12)
    assert r.edges[0] == pytest.approx(0.0) and r.edges[-1] == pytest.approx(0.5)
    full = restriction_quantization(u, 1.0, 4)
    assert full.error == pytest.approx(quantize_1d(u, 4).error, abs=1e-14)
    tri = Triangular(0, 1, 2)
    errors = [restriction_quantization(tri, 0.5, n, side="right").error for n in (4, 8, 16)]
    assert all(e > 0 for e in errors)
    assert errors[0] > errors[1] > errors[2]


def test_restriction_ratio_bounded():
    for rho in (Uniform(0, 1), Triangular(0, 1, 2), PowerLaw(2)):
        for n in (4, 16, 64, 256, 512):
            ratio = restriction_quantization(rho, 0.5, n).error / quantize_1d(rho, n).error
            assert 0.0 < ratio < 4.0


def test_block_approximation_identity():
    u = Uniform(0, 1)
    cloud = comonotone_points([u, u], 2)
    assert block_approximation_cost(cloud, [u, u]) == pytest.approx(1 / 24, abs=1e-13)
    # single block: sum of variances about the point
    cloud1 = comonotone_points([u, Triangular(0, 1, 2)], 1)
    y = cloud1.positions[0]
    want = sum(
        rho.interval_moment(rho.lo, rho.hi, 2)
        - 2 * y[j] * rho.interval_moment(rho.lo, rho.hi, 1)
        + y[j] ** 2
        for j, rho in enumerate([u, Triangular(0, 1, 2)])
    )
    assert block_approximation_cost(cloud1, [u, Triangular(0, 1, 2)]) == pytest.approx(want, abs=1e-12)
    # construction identity: equals the sum of balanced penalties
    rng = np.random.default_rng(3)
    y = rng.uniform(0, 1, (7, 2))
    total = block_approximation_cost(y, [u, u])
    parts = sum(balanced_value_grad(u, y[:, j])[0] for j in range(2))
    assert total == pytest.approx(parts, abs=1e-12)


def test_brute_force_frozen_cases():
    value, assign = brute_force_mmot([[0, 1], [0, 1]], ProductCost(), Constant())
    assert value == pytest.approx(0.5, abs=1e-14)
    assert assign == ((0, 1),)
    value, assign = brute_force_mmot([[0, 1], [0, 1]], Negated(ProductCost()), Constant())
    assert value == pytest.approx(0.0, abs=1e-14)
    assert assign == ((1, 0),)


def test_brute_force_matches_comonotone_for_supermodular():
    rng = np.random.default_rng(4)
    for _ in range(12):
        n = int(rng.integers(2, 6))
        d = int(rng.integers(2, 4))
        atoms = [np.sort(rng.uniform(0, 1, n)) for _ in range(d)]
        for alpha in (Constant(), Linear(), CVaR(0.5)):
            best, _ = brute_force_mmot(atoms, ProductCost(), alpha)
            x = np.column_stack(atoms)  # sorted pairing = comonotone
            como, _ = risk_value_and_weights(alpha, ProductCost().eval_many(x))
            assert best == pytest.approx(como, abs=1e-12)


def test_brute_force_cvar_rank_weights():
    rng = np.random.default_rng(5)
    atoms = [np.sort(rng.uniform(0, 1, 4)), np.sort(rng.uniform(0, 1, 4))]
    best, _ = brute_force_mmot(atoms, ProductCost(), CVaR(0.5))
    x = np.column_stack(atoms)
    como, _ = risk_value_and_weights(CVaR(0.5), ProductCost().eval_many(x))
    assert best == pytest.approx(como, abs=1e-13)


def test_brute_force_size_limits():
    with pytest.raises(ValueError):
        brute_force_mmot([np.arange(7)] * 2, ProductCost(), Constant())
    with pytest.raises(ValueError):
        brute_force_mmot([np.arange(3)] * 4, ProductCost(), Constant())


def test_quantized_comonotone_error_bound():
    # squared distance of the comonotone plan to its monotone quantizer is
    # at most the sum of per-marginal squared quantization errors (identity
    # for the quadratic cost and barycenter placement)
    marginals = [Uniform(0, 1), Triangular(0, 1, 2)]
    for n in (2, 8, 32):
        cloud = comonotone_points(marginals, n, placement="barycenter")
        lhs = block_approximation_cost(cloud, marginals)
        rhs = sum(quantize_1d(rho, n).error ** 2 for rho in marginals)
        assert lhs <= rhs + 1e-12
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_flow_oracle_matches_closed_forms():
    u = Uniform(0, 1)
    assert flow_partial_ot_oracle(u, [0.5], 0.5, 2000) == pytest.approx(1 / 96, abs=1e-5)
    assert flow_partial_ot_oracle(u, [0.25, 0.75], 1.0, 2000) == pytest.approx(1 / 48, abs=1e-5)


def test_flow_oracle_small_mass_decays():
    u = Uniform(0, 1)
    vals = [flow_partial_ot_oracle(u, [0.5], m, 2000) for m in (0.5, 0.1, 0.01)]
    assert vals[0] > vals[1] > vals[2] > 0.0


def test_flow_oracle_validation():
    with pytest.raises(ValueError):
        flow_partial_ot_oracle(Uniform(0, 1), [0.5], 1.5, 2000)
    with pytest.raises(ValueError):
        flow_partial_ot_oracle(Uniform(0, 1), [0.5], 0.5, 100)
    with pytest.raises(ValueError):
        flow_partial_ot_oracle(Uniform(0, 1), [0.3, 0.6, 0.9], 0.5, 2000)  # units not integral


def test_min_cost_flow_direct():
    # two sources, two unit-capacity targets: the cheap diagonal wins
    cost = np.array([[0.0, 5.0], [5.0, 0.0]])
    total, assign = min_cost_partial_assignment(cost, [1, 1], 2)
    assert total == 0.0
    assert list(assign) == [0, 1]
    # with one target, reassignment through the reverse edge must happen
    cost = np.array([[1.0, 0.0], [2.0, 10.0]])
    total, assign = min_cost_partial_assignment(cost, [1, 1], 2)
    assert total == pytest.approx(2.0)
    assert list(assign) == [1, 0]
    with pytest.raises(ValueError):
        min_cost_partial_assignment(cost, [1, 1], 3)


def test_fit_rate():
    ns = [2, 4, 8, 16]
    fit = fit_rate(ns, [1 / n for n in ns])
    assert fit.slope == pytest.approx(-1.0, abs=1e-12)
    fit = fit_rate(ns, [1 / np.sqrt(n) for n in ns])
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    ns = [2**k for k in range(1, 9)]
    errors = [quantize_1d(Uniform(0, 1), n).error for n in ns]
    fit = fit_rate(ns, errors)
    assert fit.slope == pytest.approx(-1.0, abs=1e-6)
    with pytest.raises(ValueError):
        fit_rate([1, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        fit_rate(ns, [0.0] * len(ns))

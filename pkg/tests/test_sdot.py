import numpy as np
import pytest
from scipy.integrate import quad

from riskcloud.measures import Mixture, PowerLaw, Triangular, TruncatedGumbel, TruncatedNormal, Uniform
from riskcloud.sdot import balanced_value_grad, partial_value_grad


def quad_transport_cost(rho, cells_left, cells_right, z_sorted):
    """Quadrature oracle for the transport value of a given tessellation."""
    total = 0.0
    for l, r, z in zip(cells_left, cells_right, z_sorted):
        val, _ = quad(lambda x, z=z: (x - z) ** 2 * rho.pdf(x), l, r, limit=200)
        total += val
    return total


def test_balanced_two_atoms_uniform():
    u = Uniform(0, 1)
    value, grad, cells = balanced_value_grad(u, [0.25, 0.75])
    oracle = quad_transport_cost(u, cells.left, cells.right, [0.25, 0.75])
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(1.0 / 48.0, abs=1e-13)
    assert np.allclose(grad, [0.0, 0.0], atol=1e-13)


def test_balanced_single_atom_is_variance():
    value, grad, _ = balanced_value_grad(Uniform(0, 1), [0.5])
    assert value == pytest.approx(1.0 / 12.0, abs=1e-14)
    assert grad[0] == pytest.approx(0.0, abs=1e-14)


def test_balanced_endpoints_atoms():
    value, grad, cells = balanced_value_grad(Uniform(0, 1), [0.0, 1.0])
    assert value == pytest.approx(1.0 / 12.0, abs=1e-13)
    assert np.allclose(grad, [-0.25, 0.25], atol=1e-13)
    assert np.allclose(cells.barycenter, [0.25, 0.75], atol=1e-13)


def test_balanced_cells_partition_support():
    rho = Triangular(0, 1, 2)
    _, _, cells = balanced_value_grad(rho, np.linspace(-1, 3, 7))
    assert cells.left[0] == pytest.approx(rho.lo, abs=1e-12)
    assert cells.right[-1] == pytest.approx(rho.hi, abs=1e-12)
    assert np.allclose(cells.right[:-1], cells.left[1:], atol=1e-12)
    assert np.allclose(cells.mass, 1.0 / 7.0, atol=1e-9)


def test_balanced_unsorted_atoms_map_back():
    rho = Uniform(0, 1)
    z = np.array([0.9, 0.1, 0.5])
    value, grad, cells = balanced_value_grad(rho, z)
    zs = np.sort(z)
    value2, grad2, _ = balanced_value_grad(rho, zs)
    assert value == pytest.approx(value2, abs=1e-14)
    assert np.allclose(np.sort(grad), np.sort(grad2), atol=1e-14)
    assert list(cells.order) == [1, 2, 0]


def test_partial_symmetric_ball():
    value, grad, cells = partial_value_grad(Uniform(0, 1), [0.5], 0.5)
    assert cells.psi[0] == pytest.approx(0.0625, abs=1e-10)
    assert cells.left[0] == pytest.approx(0.25, abs=1e-10)
    assert cells.right[0] == pytest.approx(0.75, abs=1e-10)
    assert value == pytest.approx(1.0 / 96.0, abs=1e-10)
    assert grad[0] == pytest.approx(0.0, abs=1e-10)


def test_partial_mass_one_equals_balanced():
    rho = Triangular(0, 1, 2)
    z = np.array([0.4, 1.7, 0.9, 1.1])
    vb, gb, cb = balanced_value_grad(rho, z)
    vp, gp, cp = partial_value_grad(rho, z, 1.0)
    assert vp == pytest.approx(vb, abs=1e-10)
    assert np.allclose(gp, gb, atol=1e-10)
    assert np.allclose(cp.left, cb.left, atol=1e-12)
    assert np.allclose(cp.right, cb.right, atol=1e-12)
    # weights must certify the tessellation: every cell inside its ball
    rad = np.sqrt(cp.psi)
    zs = z[cp.order]
    assert np.all(cp.left >= zs - rad - 1e-9)
    assert np.all(cp.right <= zs + rad + 1e-9)


def test_partial_support_clipped_cells():
    u = Uniform(0, 1)
    value, grad, cells = partial_value_grad(u, [0.1, 0.9], 0.5)
    assert np.allclose(cells.left, [0.0, 0.75], atol=1e-10)
    assert np.allclose(cells.right, [0.25, 1.0], atol=1e-10)
    oracle = quad_transport_cost(u, cells.left, cells.right, [0.1, 0.9])
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(0.0029166666666667, abs=1e-10)
    assert np.allclose(grad, [-0.0125, 0.0125], atol=1e-10)


@pytest.mark.parametrize(
    "rho",
    [
        Uniform(0, 1),
        Triangular(0, 1, 2),
        PowerLaw(2),
        TruncatedNormal(30, 8, 15),
        TruncatedGumbel(1013, 558, 500, 3000),
        Mixture([(2 / 3, Triangular(-1, 0, 1)), (1 / 3, Triangular(1, 2, 3))]),
    ],
    ids=["uniform", "tri", "powerlaw", "truncnorm", "gumbel", "mixture"],
)
@pytest.mark.parametrize("m", [0.3, 0.8, 1.0])
def test_partial_kkt_masses(rho, m):
    rng = np.random.default_rng(5)
    for trial in range(4):
        n = int(rng.integers(1, 12))
        z = rng.uniform(rho.lo - 0.1 * rho.width, rho.hi + 0.1 * rho.width, n)
        if trial == 2:
            z = np.sort(z)
            z[: n // 2 + 1] = z[0] + 1e-3 * rho.width * np.arange(n // 2 + 1)  # clustered
        _, _, cells = partial_value_grad(rho, z, m)
        mass, _, _ = rho.block_stats(cells.left, cells.right)
        assert np.max(np.abs(mass - m / n)) < 1e-9
        assert np.all(cells.right[:-1] <= cells.left[1:] + 1e-8 * rho.width)


@pytest.mark.parametrize("mode", ["balanced", "partial"])
def test_gradient_matches_finite_differences(mode):
    rng = np.random.default_rng(11)
    rhos = [Uniform(0, 1), Triangular(0, 1, 2), TruncatedNormal(30, 8, 15)]
    for rho in rhos:
        n = 8
        z = np.sort(rng.uniform(rho.lo, rho.hi, n))
        z += np.linspace(0, 1e-3 * rho.width, n)  # enforce distinct entries
        h = 1e-6 * rho.width
        if mode == "balanced":
            _, grad, _ = balanced_value_grad(rho, z)
            val = lambda zz: balanced_value_grad(rho, zz)[0]
        else:
            _, grad, _ = partial_value_grad(rho, z, 0.6)
            val = lambda zz: partial_value_grad(rho, zz, 0.6)[0]
        for i in range(n):
            zp, zm = z.copy(), z.copy()
            zp[i] += h
            zm[i] -= h
            fd = (val(zp) - val(zm)) / (2 * h)
            assert fd == pytest.approx(grad[i], rel=1e-5, abs=1e-9 * rho.width**2)


@pytest.mark.parametrize("m", [0.5, 1.0])
def test_permutation_equivariance(m):
    rng = np.random.default_rng(12)
    rho = Triangular(0, 1, 2)
    z = rng.uniform(0, 2, 9)
    perm = rng.permutation(9)
    v1, g1, _ = partial_value_grad(rho, z, m)
    v2, g2, _ = partial_value_grad(rho, z[perm], m)
    assert v1 == v2
    assert np.array_equal(g1[perm], g2)


def test_duplicate_atoms_give_subgradient():
    u = Uniform(0, 1)
    value, grad, cells = partial_value_grad(u, [0.5, 0.5], 0.5)
    assert np.allclose(cells.mass, 0.25, atol=1e-10)
    assert np.isfinite(grad).all()
    assert np.allclose(cells.left, [0.25, 0.5], atol=1e-9)
    assert np.allclose(cells.right, [0.5, 0.75], atol=1e-9)
    vb, gb, _ = balanced_value_grad(u, np.array([0.3, 0.3, 0.7]))
    assert np.isfinite(gb).all()
    assert vb > 0.0


def test_atom_outside_support():
    value, grad, cells = partial_value_grad(Uniform(0, 1), [-0.5], 0.25)
    assert cells.left[0] == pytest.approx(0.0, abs=1e-12)
    assert cells.right[0] == pytest.approx(0.25, abs=1e-10)
    # the free end must be ball-tight: radius reaches the right cell edge
    assert np.sqrt(cells.psi[0]) == pytest.approx(0.75, abs=1e-9)


def test_partial_value_decreases_for_matching_quantizers():
    # Atoms placed at the m-restriction's own quantizer drive the partial
    # cost toward zero: the pseudo-distance lacks separation.
    from riskcloud.oracles import restriction_quantization

    rho = Triangular(0, 1, 2)
    m = 0.5
    values = []
    for n in [4, 8, 16, 32]:
        atoms = restriction_quantization(rho, m, n, side="left").atoms
        v, _, _ = partial_value_grad(rho, atoms, m)
        values.append(v)
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-4


def test_invalid_inputs():
    with pytest.raises(ValueError):
        balanced_value_grad(Uniform(0, 1), [np.nan])
    with pytest.raises(ValueError):
        partial_value_grad(Uniform(0, 1), [0.5], 0.0)
    with pytest.raises(ValueError):
        partial_value_grad(Uniform(0, 1), [0.5], 1.5)
    with pytest.raises(ValueError):
        balanced_value_grad(Uniform(0, 1), [])


def test_cells_to_records_roundtrip():
    _, _, cells = partial_value_grad(Uniform(0, 1), [0.7, 0.2], 0.5)
    recs = cells.to_records()
    assert {r["index"] for r in recs} == {0, 1}
    assert all(set(r) == {"index", "l", "r", "psi", "barycenter", "mass"} for r in recs)
    assert recs[0]["l"] <= recs[0]["r"]

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellbethe import ModularParams, PoleError, Spin, baxter_r, l_operator, r_half_l, spin_rep
from ellbethe.sklyanin import (
    SIGMA,
    _spin_rep,
    comm_rel_residuals,
    pauli_residual,
    r_l_half,
    r_matrix,
    rll_residual,
    swap_matrix,
    unitarity_residual,
    weights_l,
    weights_r,
    yang_baxter_residual,
)
from ellbethe.theta import theta

coord = st.floats(min_value=-0.45, max_value=0.45)


@pytest.mark.parametrize("twice_l", [1, 2, 3])
@pytest.mark.parametrize("eta", [(1, 4), (2, 7), (3, 10)])
def test_quadratic_relations(twice_l, eta):
    rep = spin_rep(Spin(twice_l), ModularParams(0.1 + 0.95j, *eta))
    assert max(comm_rel_residuals(rep).values()) < 1e-9


def test_dimension_and_meta(params):
    rep = spin_rep(Spin(2), params)
    assert all(s.shape == (3, 3) for s in rep.s_matrices)
    assert rep.basis_meta["kind"] == "intertwiner"
    assert rep.basis_meta["condition"] < 1e10


def test_spin_parse():
    assert Spin.parse("3/2") == Spin(3)
    assert Spin.parse(0.5).dim == 2
    assert [str(m) for m in Spin(2).weights] == ["-1", "0", "1"]
    with pytest.raises(ValueError):
        Spin.parse("1/3")


def test_pauli(params):
    assert pauli_residual(params) < 1e-10


def test_l_operator_spin_half(params):
    rep = spin_rep(Spin(1), params)
    u = 0.21 - 0.08j
    op = l_operator(rep, u)
    t2 = theta("11", 2 * params.eta, params.tau)
    expected = t2 * sum(w * np.kron(SIGMA[a], SIGMA[a]) for a, w in enumerate(weights_l(u, params)))
    assert np.allclose(op.matrix, expected, rtol=0, atol=1e-12 * np.abs(expected).max())
    assert op.blocks().shape == (2, 2, 2, 2)


def test_baxter_r_at_zero_is_permutation(params):
    assert np.allclose(baxter_r(0, params).matrix, swap_matrix(2, 2), atol=1e-14)
    assert all(w == pytest.approx(0.5) for w in baxter_r(0, params).weights)


def test_baxter_r_swap_symmetric(params):
    R = baxter_r(0.3 + 0.1j, params).matrix
    P = swap_matrix(2, 2)
    assert np.allclose(P @ R @ P, R, atol=1e-14)


def test_r_weights_from_l_weights(params):
    u = -0.17 + 0.2j
    t2 = theta("11", 2 * params.eta, params.tau)
    assert np.allclose(weights_r(u, params), [t2 * w for w in weights_l(u + params.eta, params)], rtol=1e-12)


@given(coord, coord, coord, coord)
@settings(max_examples=10, deadline=None)
def test_rll_spin_half_and_one(a, b, c, d):
    params = ModularParams(0.3 + 1.1j, 2, 7)
    for twice_l in (1, 2):
        assert rll_residual(spin_rep(Spin(twice_l), params), complex(a, b / 2), complex(c, d / 2)) < 1e-9


@given(coord, coord, coord, coord)
@settings(max_examples=10, deadline=None)
def test_yang_baxter(a, b, c, d):
    params = ModularParams(0.3 + 1.1j, 2, 7)
    assert yang_baxter_residual(params, complex(a, b / 2), complex(c, d / 2)) < 1e-10


@pytest.mark.parametrize("twice_l", [1, 2])
def test_unitarity(params, twice_l):
    assert unitarity_residual(spin_rep(Spin(twice_l), params), 0.27 + 0.04j) < 1e-9


def test_r_half_half_proportional_to_baxter(params):
    u = 0.19 + 0.07j
    R = r_half_l(spin_rep(Spin(1), params), u).matrix
    B = baxter_r(u, params).matrix
    mask = np.abs(B) > 1e-12
    ratios = R[mask] / B[mask]
    assert np.ptp(np.abs(ratios)) < 1e-10 and np.allclose(ratios, ratios[0], rtol=1e-10)
    assert not np.any(np.abs(R[~mask]) > 1e-12)


def test_r_half_l_pole(params):
    rep = spin_rep(Spin(2), params)
    with pytest.raises(PoleError):
        r_half_l(rep, -3 * params.eta + 1e-15)


def test_r_matrix_dispatch(params):
    u = 0.1 + 0.2j
    assert r_matrix(1, 2, u, params).shape == (6, 6)
    assert np.allclose(r_matrix(2, 1, u, params).matrix, r_l_half(spin_rep(Spin(2), params), u).matrix)
    with pytest.raises(NotImplementedError):
        r_matrix(2, 2, u, params)


def test_representation_is_cached_and_deterministic(params):
    a = spin_rep(Spin(3), params, seed=5)
    assert spin_rep(Spin(3), params, seed=5) is a
    _spin_rep.cache_clear()
    b = spin_rep(Spin(3), params, seed=5)
    assert b is not a
    assert all(np.array_equal(x, y) for x, y in zip(a.s_matrices, b.s_matrices))

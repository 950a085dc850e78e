import numpy as np
import pytest

from ellbethe import (
    LatticeError,
    Level,
    SingularGaugeError,
    Spin,
    gauge_matrix,
    irf_weight,
    local_pseudo_vacuum,
    phi_eval,
)
from ellbethe.intertwiner import (
    action_residuals,
    identification_residual,
    intertwiner,
    twisted_l,
    vacuum_action_residuals,
    vacuum_irf_weight,
)
from ellbethe.sklyanin import l_operator, r_matrix, spin_rep
from ellbethe.theta import theta

LAM = 0.41 + 0.07j
U, V = 0.31 + 0.2j, -0.17 + 0.05j


def test_phi_eval_spin_half_single_pair(params):
    y = 0.12 - 0.03j
    # m = +1/2: one factor built on (lam + u)/2, none on (lam - u)/2
    x = (LAM + U) / 2 - params.eta / 2
    expected = theta("10", y + x, params.tau) * theta("10", y - x, params.tau)
    assert phi_eval(Spin(1), LAM, LAM - 2 * params.eta, U, y, params) == pytest.approx(expected, rel=1e-14)


def test_phi_eval_rejects_off_lattice(params):
    with pytest.raises(LatticeError):
        phi_eval(Spin(1), LAM, LAM - 0.1, U, 0.1, params)
    with pytest.raises(LatticeError):
        phi_eval(Spin(1), Level(LAM, 0), Level(LAM, 3), U, 0.1, params)


def test_local_pseudo_vacuum_is_lowest_weight(params):
    vac = local_pseudo_vacuum(Spin(1), LAM, U, params)
    y = np.array([0.1, 0.2 + 0.05j])
    assert vac.twice_m == -1
    assert np.allclose(vac.eval(y), phi_eval(Spin(1), LAM, LAM + 2 * params.eta, U, y, params))


def test_coords_reproduce_values(params):
    vec = intertwiner(Spin(2), Level(LAM, 2), Level(LAM, 0), U, params)
    rep = spin_rep(Spin(2), params)
    ys = rep.samples
    assert np.allclose(rep.evaluate_basis(ys) @ vec.coords, vec.eval(ys), rtol=1e-9)


def test_spin_one_intertwiners_form_a_basis(params):
    lam = Level(LAM, 0)
    mat = np.array([intertwiner(Spin(2), lam.shift(tm), lam, U, params).coords for tm in (-2, 0, 2)])
    assert np.linalg.cond(mat) < 1e8


def test_gauge_matrix_inverse(params):
    g = gauge_matrix(LAM, U, params)
    assert np.allclose(g.m @ g.m_inv, np.eye(2), atol=1e-11)


def test_gauge_matrix_singular_at_u_zero(params):
    with pytest.raises(SingularGaugeError):
        gauge_matrix(LAM, 0.0, params)


def test_gauge_columns_are_spin_half_intertwiners(params):
    assert identification_residual(params, LAM, U) < 1e-9


def test_twisted_l_assembly(params):
    rep = spin_rep(Spin(2), params)
    lam, lam_p = Level(LAM, 0), Level(LAM, -2)
    tw = twisted_l(rep, lam, lam_p, U, V)
    g, gp = gauge_matrix(lam, U, params), gauge_matrix(lam_p, U, params)
    d = rep.dim
    direct = np.kron(g.m_inv, np.eye(d)) @ l_operator(rep, U - V).matrix @ np.kron(gp.m, np.eye(d))
    assert np.allclose(tw.assembled(), direct, atol=1e-12 * np.abs(direct).max())


@pytest.mark.parametrize("twice_l", [1, 2])
def test_action_on_intertwiners(params, twice_l):
    res = action_residuals(Spin(twice_l), params, LAM, U, V)
    assert len(res) == 4 * (twice_l + 1)
    assert max(res.values()) < 1e-9


@pytest.mark.parametrize("twice_l", [1, 2])
def test_action_on_local_vacuum(params, twice_l):
    res = vacuum_action_residuals(Spin(twice_l), params, LAM, U, V)
    assert res["gamma"] < 1e-10
    assert max(res.values()) < 1e-9


@pytest.mark.parametrize("twice_l", [1, 2])
def test_vacuum_irf_weight_is_one(params, twice_l):
    w = vacuum_irf_weight(Spin(1), Spin(twice_l), params, LAM, 0.27 + 0.03j)
    assert w.admissible
    assert w.value == pytest.approx(1.0, abs=1e-9)


def test_irf_weight_off_lattice_is_flagged_zero(params):
    lam = Level(LAM, 0)
    w = irf_weight(Spin(1), Spin(1), (lam, lam.shift(1), lam.shift(3), lam.shift(2)), 0.2, params)
    assert not w.admissible and w.value == 0


def test_irf_reassembly(params):
    # sum over mu' of W phi (x) phi reproduces R phi (x) phi
    u, v = 0.23 + 0.05j, 0.1379 + 0.0731j
    lam = Level(LAM, 0)
    lam_p, mu = lam.shift(-1), lam
    R = r_matrix(1, 1, u, params).matrix
    s = Spin(1)
    lhs = R @ np.kron(intertwiner(s, lam, lam_p, u + v, params).coords, intertwiner(s, lam_p, mu, v, params).coords)
    rhs = 0
    for mu_p in (mu.shift(-1), mu.shift(1)):
        w = irf_weight(s, s, (lam, lam_p, mu_p, mu), u, params)
        rhs = rhs + w.value * np.kron(intertwiner(s, mu_p, mu, u + v, params).coords, intertwiner(s, lam, mu_p, v, params).coords)
    assert np.linalg.norm(lhs - rhs) < 1e-9 * np.linalg.norm(lhs)

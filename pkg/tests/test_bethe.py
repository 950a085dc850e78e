import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellbethe import (
    BetheElement,
    ChainConfig,
    LabelMismatchError,
    LatticeError,
    ModularParams,
    PathVector,
    boundary_z,
    enumerate_basis,
    global_pseudo_vacuum,
    path_vector_coords,
    r_check,
    weight_zero_count,
)
from ellbethe.bethe import expand_sectors, sector_components, zz_r_exchange
from ellbethe.monodromy import vacuum_path


def test_two_site_quarter_basis(make_chain):
    cfg = make_chain((1, 1), (1, 4))
    basis = enumerate_basis(cfg)
    assert len(basis) == 8 == cfg.r * weight_zero_count((1, 1))
    assert list(basis.elements) == sorted(basis.elements)
    assert all(p[0] == p[-1] and 0 <= p[0] < 4 for p in basis.elements)


def test_mixed_spin_basis(make_chain):
    cfg = make_chain((1, 1, 2), (2, 7))
    # m = (1/2,1/2,-1), (-1/2,-1/2,1), (1/2,-1/2,0), (-1/2,1/2,0)
    assert len(enumerate_basis(cfg)) == 7 * 4


def test_single_spin_half_site_is_rejected(params):
    # M = 1/2 is not an integer, so there is no closed path and no Bethe space
    with pytest.raises(ValueError):
        ChainConfig((1,), (0.1,), params)


@given(st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_weight_zero_count_matches_brute_force(twice_spins):
    brute = sum(sum(ms) == 0 for ms in itertools.product(*[range(-t, t + 1, 2) for t in twice_spins]))
    assert weight_zero_count(twice_spins) == brute


def test_path_admissibility(chain2):
    with pytest.raises(LatticeError):
        PathVector((0, 2, 0)).check(chain2)
    with pytest.raises(LatticeError):
        path_vector_coords((0, 1), chain2)


def test_path_periodicity(chain3):
    path = vacuum_path(2, chain3)
    a = path_vector_coords(path, chain3)
    b = path_vector_coords(tuple(x + chain3.r for x in path), chain3)
    assert np.allclose(a, b, atol=1e-12 * np.linalg.norm(a))


def test_vacuum_path_coords(chain2):
    assert np.array_equal(path_vector_coords(vacuum_path(1, chain2), chain2), global_pseudo_vacuum(1, chain2))


def test_boundary_operator_shape(make_chain):
    cfg = make_chain((1, 1), (1, 4))
    z = boundary_z(cfg)
    assert z.shape == (8, 8)
    assert np.all(np.count_nonzero(z.matrix, axis=0) == 1)
    assert np.all(np.count_nonzero(z.matrix, axis=1) == 1)


def test_boundary_factor_trivial_on_vacuum_step(make_chain):
    cfg = make_chain((1, 1), (1, 4), c=0.7 - 0.3j)
    basis = enumerate_basis(cfg)
    z = boundary_z(cfg).matrix
    for k, path in enumerate(basis.elements):
        value = z[:, k][np.nonzero(z[:, k])][0]
        expected = np.exp(cfg.c * (path[-1] - path[-2] - cfg.twice_spins[-1]))
        assert value == pytest.approx(expected)
        if path[-1] - path[-2] == cfg.twice_spins[-1]:
            assert value == pytest.approx(1.0)


def test_r_check_unitarity(chain3):
    for j in (1, 2):
        prod = r_check(j, chain3.swapped(j)) @ r_check(j, chain3)
        assert np.allclose(prod.matrix, np.eye(prod.shape[0]), atol=1e-9)


def test_r_check_on_vacuum(chain2):
    # the vacuum path of sector 0 goes to the swapped chain's vacuum path with weight 1
    basis = enumerate_basis(chain2)
    dst = enumerate_basis(chain2.swapped(1))
    mat = r_check(1, chain2).matrix
    for a in range(chain2.r):
        path = (a, a + 1, a + 2)
        if path[-1] != path[0]:
            continue
        assert mat[dst.index(path), basis.index(path)] == pytest.approx(1.0, abs=1e-9)


def test_zz_exchange(chain2, chain3):
    for cfg in (chain2, chain3):
        lhs, rhs = zz_r_exchange(cfg)
        assert np.linalg.norm(lhs.matrix - rhs.matrix) < 1e-9 * np.linalg.norm(lhs.matrix)


def test_label_discipline(chain2):
    z = boundary_z(chain2)
    with pytest.raises(LabelMismatchError):
        z @ z
    with pytest.raises(LabelMismatchError):
        r_check(1, chain2).apply(np.zeros(len(enumerate_basis(chain2))), chain2.shifted(1).label)


def test_sector_roundtrip(chain2):
    basis = enumerate_basis(chain2)
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    elem = BetheElement(basis, coeffs)
    back = expand_sectors(chain2, sector_components(elem))
    assert np.allclose(back.coeffs, coeffs, atol=1e-9)


def test_nu_phase(make_chain):
    cfg = make_chain((1, 1), (1, 4), nu=1)
    basis = enumerate_basis(cfg)
    k = basis.sector(3)[0]
    assert basis.phase(k) == pytest.approx(np.exp(2j * np.pi * 3 * 0.25))
    assert basis.phase(k, nu=0) == 1
    assert ModularParams(0.3 + 1.1j, 1, 4).r == 4

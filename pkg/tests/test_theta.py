import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellbethe import DomainError, ModularParams, ThetaChar, pochhammer, pochhammer_double, precision, theta

finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
im_tau = st.floats(min_value=0.4, max_value=2.0)


@given(finite, finite, finite, im_tau)
@settings(max_examples=60, deadline=None)
def test_theta11_is_odd(x, y, tr, ti):
    z = complex(x, y * ti)
    tau = complex(tr, ti)
    assert abs(theta("11", -z, tau) + theta("11", z, tau)) < 1e-12 * max(1.0, abs(theta("11", z, tau)))


@given(finite, finite, finite, im_tau)
@settings(max_examples=60, deadline=None)
def test_theta11_quasi_periodic(x, y, tr, ti):
    z = complex(x, y * ti)
    tau = complex(tr, ti)
    lhs = theta("11", z + tau, tau)
    factor = -cmath.exp(-1j * cmath.pi * tau - 2j * cmath.pi * z)
    rhs = factor * theta("11", z, tau)
    # near the zero at z = 0 both sides are rounding noise, so scale by the factor
    assert abs(lhs - rhs) <= 1e-10 * abs(factor) * max(1.0, abs(theta("11", z, tau)))


@pytest.mark.parametrize("char", ["00", "01", "10", "11"])
def test_integer_shift(char):
    z, tau = 0.23 - 0.31j, 0.1 + 0.9j
    sign = -1 if char[0] == "1" else 1
    assert theta(char, z + 1, tau) == pytest.approx(sign * theta(char, z, tau), rel=1e-13)


def test_known_values():
    assert abs(theta("11", 0, 0.3j)) < 1e-15
    assert theta("00", 0, 1j) == pytest.approx(1.08643481121330801, rel=1e-15)


def test_matches_mpmath_jtheta():
    # Mumford theta00 is Jacobi theta3 with nome e^{pi i tau} and argument pi z
    z, tau = 0.17 + 0.05j, 0.2 + 0.8j
    ref = complex(mpmath.jtheta(3, mpmath.pi * z, mpmath.exp(1j * mpmath.pi * tau)))
    assert theta("00", z, tau) == pytest.approx(ref, rel=1e-14)


def test_vectorized_arguments():
    zs = np.array([0.1, 0.2 + 0.1j, -0.3j])
    got = theta("10", zs, 0.5j)
    assert got.shape == (3,)
    assert got[1] == pytest.approx(theta("10", zs[1], 0.5j))


def test_extended_precision_agrees():
    z, tau = 0.31 + 0.12j, -0.2 + 0.7j
    with precision("extended"):
        hi = theta("01", z, tau)
    assert hi == pytest.approx(theta("01", z, tau), rel=1e-14)


def test_bad_tau_and_characteristic():
    with pytest.raises(DomainError):
        theta("00", 0.1, -0.5j)
    with pytest.raises(ValueError):
        ThetaChar(2, 0)
    with pytest.raises(DomainError):
        ModularParams(0.5j, 2, 4)


def test_pochhammer_examples():
    assert pochhammer(0, 0.3) == 1
    assert pochhammer(0.5, 0) == pytest.approx(0.5)
    # the truncated product, checked against mpmath's q-Pochhammer
    assert pochhammer(0.5, 0.1) == pytest.approx(float(mpmath.qp(0.5, 0.1)), rel=1e-15)
    assert pochhammer(0.5, 0.1) == pytest.approx(0.4723624438165722, rel=1e-14)
    with pytest.raises(DomainError):
        pochhammer(0.5, 1.0)


def test_pochhammer_double():
    x, p, q = 0.2, 0.1, 0.15
    assert pochhammer_double(0, p, q) == 1
    assert pochhammer_double(x, p, 0) == pytest.approx(pochhammer(x, p))
    swapped = np.prod([pochhammer(x * p**m, q) for m in range(40)])
    assert pochhammer_double(x, p, q) == pytest.approx(swapped, rel=1e-14)
    with pytest.raises(DomainError):
        pochhammer_double(x, p, 1.2)


def test_triple_product():
    z, tau = 0.13 + 0.07j, 0.25 + 1.05j
    p, h, w = cmath.exp(2j * cmath.pi * tau), cmath.exp(1j * cmath.pi * tau), cmath.exp(2j * cmath.pi * z)
    prod = pochhammer(p, p) * pochhammer(-h * w, p) * pochhammer(-h / w, p)
    assert theta("00", z, tau) == pytest.approx(prod, rel=1e-13)


def test_modular_params():
    p = ModularParams.from_eta(0.3 + 1.1j, 0.25, kappa=0.2 + 0.7j)
    assert (p.eta_num, p.eta_den, p.r) == (1, 4, 4)
    assert p.nome_q == pytest.approx(cmath.exp(2j * cmath.pi * (0.2 + 0.7j)))

"""Scalar weight functions ``F^l`` and ``Phi`` as infinite products.

Both functions are products of Pochhammer symbols in ``x e^{+-2 pi i t}``.
When ``q`` is a power of ``p`` up to a root of unity (for example
``kappa = tau + 1/2``), zeros of a numerator factor can land on zeros of a
denominator factor.  The value at such a point is the limit in ``t``; it is
computed exactly by tracking every vanishing factor ``1 - X e^{2 pi i s t}``
through its derivative ``-2 pi i s`` and its order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import DomainError, PoleError
from .intertwiner import alpha_l, delta_l
from .sklyanin import Spin
from .theta import EPS, ModularParams, theta

VANISH_TOL = 1e-13


@dataclass(frozen=True)
class Germ:
    """``exp(log_lead) * eps**order``: the leading behaviour near a point.

    The coefficient is kept as a logarithm because the partial products of
    the Pochhammer symbols overflow far out on the cycle even when the full
    quotient is tiny.
    """

    log_lead: complex = 0j
    order: int = 0

    @classmethod
    def of(cls, value: complex, order: int = 0) -> "Germ":
        return cls(cmath.log(value), order)

    def __mul__(self, other: "Germ") -> "Germ":
        return Germ(self.log_lead + other.log_lead, self.order + other.order)

    def __truediv__(self, other: "Germ") -> "Germ":
        return Germ(self.log_lead - other.log_lead, self.order - other.order)

    def value(self, what: str = "function") -> complex:
        if self.order > 0:
            return 0j
        if self.order < 0:
            raise PoleError(f"{what} has a pole of order {-self.order} here")
        if self.log_lead.real < -745:
            return 0j
        return cmath.exp(self.log_lead)


def _factor(x: complex, s: int) -> Germ:
    """The germ of ``1 - x`` where ``x`` depends on ``t`` through ``e^{2 pi i s t}``."""
    one_minus = 1 - x
    if abs(one_minus) < VANISH_TOL:
        return Germ.of(-2j * cmath.pi * s * x, 1)
    return Germ.of(one_minus)


def poch_germ(x: complex, p: complex, s: int) -> Germ:
    """Germ of ``(x; p)_inf``."""
    if abs(p) >= 1:
        raise DomainError(f"|p| must be < 1, got {abs(p)}")
    out = Germ()
    while abs(x) >= EPS:
        out = out * _factor(x, s)
        x *= p
    return out


def poch2_germ(x: complex, p: complex, q: complex, s: int) -> Germ:
    """Germ of ``(x; p, q)_inf``."""
    if abs(p) >= 1 or abs(q) >= 1:
        raise DomainError(f"|p| and |q| must be < 1, got {abs(p)}, {abs(q)}")
    out = Germ()
    col = x
    while abs(col) >= EPS:
        out = out * poch_germ(col, p, s)
        col *= q
    return out


def _nomes(params: ModularParams, kappa: complex):
    if kappa.imag <= 0:
        raise DomainError(f"Im kappa must be positive, got {kappa}")
    return params.nome_p, cmath.exp(2j * cmath.pi * kappa)


@dataclass(frozen=True)
class WeightFunctions:
    """``F^l`` and ``Phi`` for fixed ``tau``, ``eta`` and ``kappa``."""

    params: ModularParams
    kappa: complex

    def f_l_germ(self, spin, t) -> Germ:
        spin = Spin.parse(spin)
        t = complex(t)
        p, q = _nomes(self.params, self.kappa)
        two_l_eta = spin.twice_l * self.params.eta
        e_minus = cmath.exp(-2j * cmath.pi * t)
        e_plus = 1 / e_minus
        w = cmath.exp(2j * cmath.pi * two_l_eta)
        # the e^{-pi i t} factor supplies the e^{-pi i kappa} that the bare
        # Pochhammer ratio lacks under t -> t + kappa
        pre = Germ(-2j * cmath.pi * two_l_eta * t / self.kappa - 1j * cmath.pi * t)
        num = poch2_germ(q * e_minus * w, p, q, -1) * poch2_germ(p * q * e_plus * w, p, q, 1)
        den = poch2_germ(e_minus / w, p, q, -1) * poch2_germ(p * e_plus / w, p, q, 1)
        return pre * num / den

    def f_l(self, spin, t) -> complex:
        return self.f_l_germ(spin, t).value(f"F^{Spin.parse(spin)}({complex(t)})")

    def phi_germ(self, t) -> Germ:
        t = complex(t)
        p, q = _nomes(self.params, self.kappa)
        eta = self.params.eta
        e_minus = cmath.exp(-2j * cmath.pi * t)
        e_plus = 1 / e_minus
        w = cmath.exp(4j * cmath.pi * eta)
        pre = Germ(4j * cmath.pi * eta * t / self.kappa)
        single = poch_germ(e_minus, p, -1) * poch_germ(p * e_plus, p, 1)
        num = poch2_germ(q * e_minus / w, p, q, -1) * poch2_germ(p * q * e_plus / w, p, q, 1)
        den = poch2_germ(e_minus * w, p, q, -1) * poch2_germ(p * e_plus * w, p, q, 1)
        return pre * single * num / den

    def phi_pair(self, t) -> complex:
        return self.phi_germ(t).value(f"Phi({complex(t)})")

    # --- the functions the products are meant to solve ----------------------

    def ratio_theta(self, spin, t) -> complex:
        """``delta^l(t) / alpha^l(t + kappa)`` from theta functions."""
        return delta_l(spin, t, self.params) / alpha_l(spin, t + self.kappa, self.params)

    def ratio_product(self, spin, t) -> complex:
        """The same ratio from single Pochhammer symbols.

        The theta quotient equals ``e^{-pi i kappa} e^{-4 pi i l eta}`` times
        the four-symbol ratio; the first factor comes from the quasi-period
        of ``theta11`` and is easy to lose.
        """
        spin = Spin.parse(spin)
        t = complex(t)
        p, q = _nomes(self.params, self.kappa)
        w = cmath.exp(2j * cmath.pi * spin.twice_l * self.params.eta)
        e_minus = cmath.exp(-2j * cmath.pi * t)
        num = poch_germ(e_minus * w, p, -1) * poch_germ(p / (e_minus * w), p, 1)
        den = poch_germ(e_minus / (q * w), p, -1) * poch_germ(p * q * w / e_minus, p, 1)
        return cmath.exp(-1j * cmath.pi * self.kappa) * (num / den).value("product ratio") / w

    def alpha_ex(self, u) -> complex:
        """``theta11(u - 2 eta) / theta11(u)``."""
        tau, eta = self.params.tau, self.params.eta
        den = theta("11", u, tau)
        if abs(den) < VANISH_TOL:
            raise PoleError(f"theta11 vanishes at {u}")
        return theta("11", u - 2 * eta, tau) / den


def weight_functions(params: ModularParams, kappa) -> WeightFunctions:
    return WeightFunctions(params, complex(kappa))

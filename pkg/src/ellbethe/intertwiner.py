"""Intertwining vectors, gauge matrices, twisted L operators and IRF weights.

Dynamical parameters live on the lattice ``lambda = lambda_ring + 2 a eta``
and are carried as :class:`Level` values so that every admissibility test is
integer arithmetic on ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import ExpansionError, LatticeError, PoleError, SingularGaugeError
from .sklyanin import (
    SklyaninRep,
    Spin,
    guard,
    intertwiner_shifts,
    l_operator,
    product_of_pairs,
    r_matrix,
    spin_rep,
)
from .theta import ModularParams, theta

DET_RTOL = 1e-12
IRF_RTOL = 1e-8
# spectral parameter of the second factor when extracting IRF weights
IRF_V_REF = 0.1379 + 0.0731j


@dataclass(frozen=True)
class Level:
    """The dynamical parameter ``base + 2 a eta`` with integer ``a``."""

    base: complex
    a: int

    def value(self, eta: float) -> complex:
        return self.base + 2 * self.a * eta

    def shift(self, da: int) -> "Level":
        return Level(self.base, self.a + da)


def _as_value(lam, eta) -> complex:
    return lam.value(eta) if isinstance(lam, Level) else complex(lam)


def twice_m_of(spin: Spin, lam, lam_prime, eta) -> int:
    """``2m`` with ``lam - lam_prime = 4 m eta``; raises if off the allowed lattice."""
    if isinstance(lam, Level) and isinstance(lam_prime, Level):
        if lam.base != lam_prime.base:
            raise LatticeError("levels with different base points cannot be compared exactly")
        twice_m = lam.a - lam_prime.a
    else:
        ratio = (_as_value(lam, eta) - _as_value(lam_prime, eta)) / (2 * eta)
        twice_m = int(round(ratio.real))
        if abs(ratio - twice_m) > 1e-9:
            raise LatticeError(f"lambda - lambda' = {2 * eta * ratio} is not a multiple of 2 eta")
    if abs(twice_m) > spin.twice_l or (twice_m - spin.twice_l) % 2:
        raise LatticeError(f"m = {twice_m}/2 is not a weight of spin {spin}")
    return twice_m


def is_admissible(spin: Spin, twice_m: int) -> bool:
    return abs(twice_m) <= spin.twice_l and (twice_m - spin.twice_l) % 2 == 0


def phi_eval(spin, lam, lam_prime, u, y, params: ModularParams):
    """Evaluate the outgoing intertwining vector ``phi_{lam, lam'}(u)`` at ``y``."""
    spin = Spin.parse(spin)
    twice_m = twice_m_of(spin, lam, lam_prime, params.eta)
    xs = intertwiner_shifts(spin.twice_l, twice_m, _as_value(lam, params.eta), None, complex(u), params.eta)
    out = product_of_pairs(xs, y, params.tau)
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class IntertwinerVector:
    spin: Spin
    lam: object
    lam_prime: object
    u: complex
    twice_m: int
    eval: Callable
    coords: np.ndarray

    @property
    def m(self):
        return self.twice_m / 2


def intertwiner(spin, lam, lam_prime, u, params: ModularParams, seed=None) -> IntertwinerVector:
    spin = Spin.parse(spin)
    twice_m = twice_m_of(spin, lam, lam_prime, params.eta)
    lam_v = _as_value(lam, params.eta)
    xs = intertwiner_shifts(spin.twice_l, twice_m, lam_v, None, complex(u), params.eta)

    def evaluator(y):
        return product_of_pairs(xs, y, params.tau)

    rep = spin_rep(spin, params) if seed is None else spin_rep(spin, params, seed)
    coords = rep.coords(evaluator)
    coords.setflags(write=False)
    return IntertwinerVector(spin, lam, lam_prime, complex(u), twice_m, evaluator, coords)


def local_pseudo_vacuum(spin, lam, u, params: ModularParams) -> IntertwinerVector:
    """``omega_lam(u) = phi_{lam, lam + 4 l eta}(u)`` (the ``m = -l`` vector)."""
    spin = Spin.parse(spin)
    lam_prime = lam.shift(spin.twice_l) if isinstance(lam, Level) else _as_value(lam, params.eta) + 2 * spin.twice_l * params.eta
    return intertwiner(spin, lam, lam_prime, u, params)


def alpha_l(spin, u, params: ModularParams) -> complex:
    """``theta11(u + 2 l eta) / theta11(2 eta)``."""
    spin = Spin.parse(spin)
    t2 = guard(theta("11", 2 * params.eta, params.tau), "theta11(2 eta)")
    return theta("11", u + spin.twice_l * params.eta, params.tau) / t2


def delta_l(spin, u, params: ModularParams) -> complex:
    """``theta11(u - 2 l eta) / theta11(2 eta)``."""
    spin = Spin.parse(spin)
    t2 = guard(theta("11", 2 * params.eta, params.tau), "theta11(2 eta)")
    return theta("11", u - spin.twice_l * params.eta, params.tau) / t2


# --- gauge transformation ---------------------------------------------------


def gauge_constant(params: ModularParams) -> complex:
    """The normalization constant relating spin-1/2 intertwiners to gauge columns."""
    tau = params.tau
    num = np.exp(-1j * np.pi * tau / 8) * theta("00", 0, tau) ** 2 * theta("01", 0, tau) * theta("10", 0, tau)
    den = (
        2
        * theta("10", 0, tau / 2)
        * theta("01", 0, 2 * tau)
        * theta("10", (1 + tau) / 4, tau)
        * theta("10", (1 - tau) / 4, tau)
    )
    return num / den


@dataclass(frozen=True, eq=False)
class GaugeMatrix:
    lam: complex
    u: complex
    m: np.ndarray
    m_inv: np.ndarray
    norm_c: complex


def gauge_columns(lam: complex, u: complex, tau: complex) -> np.ndarray:
    """The theta part of the gauge matrix, before the diagonal rescaling."""
    half = tau / 2
    return np.array(
        [
            [-theta("01", (lam - u) / 2, half), -theta("01", (lam + u) / 2, half)],
            [theta("00", (lam - u) / 2, half), theta("00", (lam + u) / 2, half)],
        ],
        dtype=complex,
    )


def gauge_matrix(lam, u, params: ModularParams) -> GaugeMatrix:
    lam_v = _as_value(lam, params.eta)
    u = complex(u)
    t_lam = theta("11", lam_v, params.tau)
    if abs(t_lam) < 1e-13:
        raise PoleError(f"theta11(lambda) vanishes at lambda = {lam_v}")
    mat = gauge_columns(lam_v, u, params.tau) @ np.diag([1.0, 1.0 / t_lam])
    det = np.linalg.det(mat)
    scale = np.max(np.abs(mat)) ** 2
    if abs(det) < DET_RTOL * scale:
        raise SingularGaugeError(f"gauge matrix is singular at lambda = {lam_v}, u = {u}")
    inv = np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]]) / det
    mat.setflags(write=False)
    inv.setflags(write=False)
    return GaugeMatrix(lam_v, u, mat, inv, gauge_constant(params))


# --- twisted L operator -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class TwistedL:
    lam: complex
    lam_prime: complex
    u: complex
    v: complex
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray

    def assembled(self) -> np.ndarray:
        return np.block([[self.alpha, self.beta], [self.gamma, self.delta]])


def twisted_l(rep: SklyaninRep, lam, lam_prime, u, v) -> TwistedL:
    """``M_lam(u)^{-1} L(u - v) M_lam'(u)`` split into its four ``V^l`` blocks."""
    p = rep.params
    g = gauge_matrix(lam, u, p)
    g_prime = gauge_matrix(lam_prime, u, p)
    blocks = l_operator(rep, complex(u) - complex(v)).blocks()
    tw = np.einsum("ij,jkab,kl->ilab", g.m_inv, blocks, g_prime.m)
    return TwistedL(g.lam, g_prime.lam, complex(u), complex(v), tw[0, 0], tw[0, 1], tw[1, 0], tw[1, 1])


# --- IRF weights ------------------------------------------------------------


@dataclass(frozen=True)
class IrfWeight:
    corners: tuple
    u: complex
    value: complex
    admissible: bool
    residual: float


def irf_weight(spin, spin_prime, corners, u, params: ModularParams) -> IrfWeight:
    """Face weight ``W(lam, lam', mu', mu | u)`` read off from the R-matrix action.

    ``R(u) phi_{lam,lam'}(u + v) (x) phi_{lam',mu}(v)`` is expanded over the
    products ``phi_{mu'',mu}(u + v) (x) phi_{lam,mu''}(v)`` for every
    admissible ``mu''`` and the coefficient of the requested ``mu'`` is
    returned.  Corners must be :class:`Level` values with a common base.
    """
    spin, spin_prime = Spin.parse(spin), Spin.parse(spin_prime)
    lam, lam_p, mu_p, mu = corners
    u = complex(u)
    v = IRF_V_REF
    key = tuple(corners)

    def ok(s, x, y):
        return is_admissible(s, x.a - y.a)

    if not (ok(spin, lam, lam_p) and ok(spin_prime, lam_p, mu)):
        return IrfWeight(key, u, 0j, False, 0.0)
    if not (ok(spin, mu_p, mu) and ok(spin_prime, lam, mu_p)):
        return IrfWeight(key, u, 0j, False, 0.0)

    R = r_matrix(spin.twice_l, spin_prime.twice_l, u, params).matrix
    lhs = R @ np.kron(intertwiner(spin, lam, lam_p, u + v, params).coords, intertwiner(spin_prime, lam_p, mu, v, params).coords)
    candidates = []
    for twice_k in range(-spin.twice_l, spin.twice_l + 1, 2):
        cand = mu.shift(twice_k)
        if ok(spin_prime, lam, cand):
            candidates.append(cand)
    cols = [
        np.kron(intertwiner(spin, c, mu, u + v, params).coords, intertwiner(spin_prime, lam, c, v, params).coords)
        for c in candidates
    ]
    A = np.array(cols).T
    w, *_ = np.linalg.lstsq(A, lhs, rcond=None)
    resid = float(np.linalg.norm(A @ w - lhs) / max(np.linalg.norm(lhs), 1e-300))
    if resid > IRF_RTOL:
        raise ExpansionError(f"IRF expansion residual {resid:.2e} exceeds {IRF_RTOL}")
    value = w[candidates.index(mu_p)]
    return IrfWeight(key, u, complex(value), True, resid)


# --- action formulas --------------------------------------------------------


def _rel_to(lhs, rhs, ref) -> float:
    scale = max(np.linalg.norm(lhs), np.linalg.norm(ref))
    return float(np.linalg.norm(lhs - rhs) / scale)


def action_residuals(spin, params: ModularParams, lambda_ring, u, v, seed=None) -> dict[str, float]:
    """Residuals of the four twisted-L entries acting on ``phi_{lam', lam}(v)``.

    Keys are ``"<entry> m=<m>"``; ``lam = lambda_ring`` and ``lam' = lam - 4 m eta``
    for every weight ``m`` of the spin.  Where the predicted target path is not
    admissible the prediction is the zero vector (its coefficient vanishes).
    """
    spin = Spin.parse(spin)
    rep = spin_rep(spin, params) if seed is None else spin_rep(spin, params, seed)
    t11 = lambda x: theta("11", x, params.tau)  # noqa: E731
    eta, l = params.eta, spin.twice_l / 2
    u, v = complex(u), complex(v)
    lam = Level(complex(lambda_ring), 0)
    lv = lam.value(eta)
    out = {}
    for twice_m in range(-spin.twice_l, spin.twice_l + 1, 2):
        m = twice_m / 2
        lam_p = lam.shift(-twice_m)
        tw = twisted_l(rep, lam, lam_p, u, v)
        vec = intertwiner(spin, lam_p, lam, v, params, seed).coords
        t2 = t11(2 * eta)
        predicted = {
            "alpha": (tw.alpha, t11(u - v + 2 * m * eta) * t11(lv + 2 * (l - m) * eta) / (t11(lv) * t2), (-1, -1)),
            "beta": (
                tw.beta,
                t11(u - v + lv - 2 * m * eta) * t11(2 * (l + m) * eta) / (t11(lv) * t11(lv - 4 * m * eta) * t2),
                (1, -1),
            ),
            "gamma": (tw.gamma, t11(u - v - lv + 2 * m * eta) * t11(2 * (m - l) * eta) / t2, (-1, 1)),
            "delta": (tw.delta, t11(u - v - 2 * m * eta) * t11(lv - 2 * (l + m) * eta) / (t11(lv - 4 * m * eta) * t2), (1, 1)),
        }
        for name, (op, coef, (s1, s2)) in predicted.items():
            lhs = op @ vec
            first, second = lam_p.shift(s1), lam.shift(s2)
            if is_admissible(spin, first.a - second.a):
                rhs = coef * intertwiner(spin, first, second, v, params, seed).coords
            else:
                rhs = np.zeros_like(lhs)
            out[f"{name} m={Fraction(twice_m, 2)}"] = _rel_to(lhs, rhs, vec)
    return out


def vacuum_action_residuals(spin, params: ModularParams, lambda_ring, u, v) -> dict[str, float]:
    """``alpha``, ``gamma`` and ``delta`` of ``L_{lam'+4l eta, lam'}`` on ``omega_{lam'}(v)``."""
    spin = Spin.parse(spin)
    rep = spin_rep(spin, params)
    lam_p = Level(complex(lambda_ring), 0)
    tw = twisted_l(rep, lam_p.shift(spin.twice_l), lam_p, u, v)
    vac = local_pseudo_vacuum(spin, lam_p, v, params).coords
    d = complex(u) - complex(v)
    down = alpha_l(spin, d, params) * local_pseudo_vacuum(spin, lam_p.shift(-1), v, params).coords
    up = delta_l(spin, d, params) * local_pseudo_vacuum(spin, lam_p.shift(1), v, params).coords
    return {
        "alpha": _rel_to(tw.alpha @ vac, down, vac),
        "gamma": _rel_to(tw.gamma @ vac, 0 * vac, vac),
        "delta": _rel_to(tw.delta @ vac, up, vac),
    }


def vacuum_irf_weight(spin, spin_prime, params: ModularParams, lambda_ring, u) -> IrfWeight:
    """The weight at the vacuum corners ``(lam, lam+4l eta, lam+4l' eta, lam+4(l+l') eta)``."""
    spin, spin_prime = Spin.parse(spin), Spin.parse(spin_prime)
    lam = Level(complex(lambda_ring), 0)
    corners = (lam, lam.shift(spin.twice_l), lam.shift(spin_prime.twice_l), lam.shift(spin.twice_l + spin_prime.twice_l))
    return irf_weight(spin, spin_prime, corners, u, params)


def identification_residual(params: ModularParams, lam, u) -> float:
    """Spin-1/2 intertwiners against the columns of the gauge matrix, times ``C``.

    ``phi_{lam +- 2 eta, lam}(u - eta)`` must have coordinates
    ``C (-theta01((lam +- u)/2; tau/2), theta00((lam +- u)/2; tau/2))``.
    """
    lam, u = complex(lam), complex(u)
    eta, tau = params.eta, params.tau
    cols = gauge_columns(lam, u, tau)
    const = gauge_constant(params)
    worst = 0.0
    for sign, col in ((1, 1), (-1, 0)):
        got = intertwiner(Spin(1), lam + 2 * sign * eta, lam, u - eta, params).coords
        want = const * cols[:, col]
        worst = max(worst, _rel_to(got, want, want))
    return worst

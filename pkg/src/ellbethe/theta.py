"""Jacobi theta functions with characteristics and q-Pochhammer products.

Conventions follow Mumford::

    theta_ab(z; tau) = sum_n exp(pi i (a/2 + n)^2 tau + 2 pi i (a/2 + n)(b/2 + z))

All scalar kernels route through :func:`precision`, which selects IEEE double
(numpy) or extended precision (mpmath, 40 digits) evaluation.  Results are
always returned as Python/numpy complex numbers.
"""

from __future__ import annotations

import cmath
import contextlib
import contextvars
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import mpmath
import numpy as np

from .errors import DomainError

EPS = np.finfo(float).eps
EXTENDED_DPS = 40

_precision: contextvars.ContextVar[str] = contextvars.ContextVar("precision", default="double")


@contextlib.contextmanager
def precision(mode: str) -> Iterator[None]:
    """Temporarily switch the scalar backend (``"double"`` or ``"extended"``)."""
    if mode not in ("double", "extended"):
        raise ValueError(f"unknown precision mode {mode!r}")
    token = _precision.set(mode)
    try:
        yield
    finally:
        _precision.reset(token)


def current_precision() -> str:
    return _precision.get()


@dataclass(frozen=True)
class ThetaChar:
    a: int
    b: int

    def __post_init__(self):
        if self.a not in (0, 1) or self.b not in (0, 1):
            raise ValueError(f"theta characteristic must be in {{0,1}}^2, got {self.a}{self.b}")

    @classmethod
    def parse(cls, char) -> "ThetaChar":
        if isinstance(char, ThetaChar):
            return char
        if isinstance(char, str):
            if len(char) != 2:
                raise ValueError(f"bad characteristic {char!r}")
            return cls(int(char[0]), int(char[1]))
        a, b = char
        return cls(int(a), int(b))

    def __str__(self):
        return f"{self.a}{self.b}"


@dataclass(frozen=True)
class ModularParams:
    """Modular parameter ``tau``, rational ``eta = eta_num / eta_den`` and step ``kappa``."""

    tau: complex
    eta_num: int
    eta_den: int
    kappa: complex | None = None
    eta: float = field(init=False, repr=False)

    def __post_init__(self):
        tau = complex(self.tau)
        object.__setattr__(self, "tau", tau)
        if tau.imag <= 0:
            raise DomainError(f"Im(tau) must be positive, got {tau}")
        if self.eta_den <= 0:
            raise DomainError("eta denominator must be positive")
        if math.gcd(self.eta_num, self.eta_den) != 1:
            raise DomainError(f"eta = {self.eta_num}/{self.eta_den} is not in lowest terms")
        if self.kappa is not None:
            object.__setattr__(self, "kappa", complex(self.kappa))
        object.__setattr__(self, "eta", self.eta_num / self.eta_den)

    @classmethod
    def from_eta(cls, tau, eta, kappa=None, max_den=10**6) -> "ModularParams":
        frac = Fraction(eta).limit_denominator(max_den)
        return cls(tau, frac.numerator, frac.denominator, kappa)

    @property
    def r(self) -> int:
        return self.eta_den

    @property
    def nome_p(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.tau)

    @property
    def nome_q(self) -> complex:
        if self.kappa is None:
            raise DomainError("kappa is not set")
        return cmath.exp(2j * cmath.pi * self.kappa)

    def with_kappa(self, kappa) -> "ModularParams":
        return ModularParams(self.tau, self.eta_num, self.eta_den, kappa)


def _theta_double(a: int, b: int, z, tau: complex):
    z = np.asarray(z, dtype=complex)
    shift = b / 2 + z
    total = np.zeros_like(z)
    running_max = 0.0
    quiet = 0
    # shells of |k| in increasing order; k = a/2 + n
    shell = 0
    while True:
        if a == 0:
            ks = (0.0,) if shell == 0 else (float(shell), float(-shell))
        else:
            ks = (shell + 0.5, -shell - 0.5)
        biggest = 0.0
        for k in ks:
            term = np.exp(1j * np.pi * k * k * tau + 2j * np.pi * k * shift)
            total = total + term
            biggest = max(biggest, float(np.max(np.abs(term))) if term.ndim else abs(complex(term)))
        running_max = max(running_max, biggest)
        if biggest < EPS * running_max:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        shell += 1
        if shell > 10_000:
            raise DomainError("theta series failed to converge")
    return total


def _theta_mp(a: int, b: int, z: complex, tau: complex) -> complex:
    with mpmath.workdps(EXTENDED_DPS):
        z = mpmath.mpc(z)
        tau = mpmath.mpc(tau)
        eps = mpmath.mpf(10) ** (-EXTENDED_DPS)
        total = mpmath.mpc(0)
        running_max = mpmath.mpf(0)
        quiet = 0
        shell = 0
        while True:
            ks = ([0] if shell == 0 else [shell, -shell]) if a == 0 else [shell + 0.5, -shell - 0.5]
            biggest = mpmath.mpf(0)
            for k in ks:
                k = mpmath.mpf(k)
                term = mpmath.exp(1j * mpmath.pi * k * k * tau + 2j * mpmath.pi * k * (mpmath.mpf(b) / 2 + z))
                total += term
                biggest = max(biggest, abs(term))
            running_max = max(running_max, biggest)
            if biggest < eps * running_max:
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
            shell += 1
        return complex(total)


def theta(char, z, tau):
    """Evaluate ``theta_char(z; tau)``; ``z`` may be a scalar or an array.

    The series is summed in shells of increasing ``|a/2 + n|`` until three
    consecutive shells are negligible relative to the largest term seen.
    Arguments are used as given (no lattice reduction).
    """
    ch = ThetaChar.parse(char)
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"Im(tau) must be positive, got {tau}")
    if current_precision() == "extended":
        if np.ndim(z) == 0:
            return _theta_mp(ch.a, ch.b, complex(z), tau)
        zs = np.asarray(z, dtype=complex)
        return np.vectorize(lambda w: _theta_mp(ch.a, ch.b, w, tau), otypes=[complex])(zs)
    out = _theta_double(ch.a, ch.b, z, tau)
    return complex(out) if np.ndim(out) == 0 else out


theta_eval = theta


def theta11(z, tau):
    return theta((1, 1), z, tau)


def pochhammer(x, p) -> complex:
    """``(x; p)_inf = prod_{m>=0} (1 - p^m x)``, dropping factors once ``|p^m x| < eps``."""
    x, p = complex(x), complex(p)
    if abs(p) >= 1:
        raise DomainError(f"|p| must be < 1, got {abs(p)}")
    if current_precision() == "extended":
        with mpmath.workdps(EXTENDED_DPS):
            eps = mpmath.mpf(10) ** (-EXTENDED_DPS)
            xm, pm = mpmath.mpc(x), mpmath.mpc(p)
            prod = mpmath.mpc(1)
            while abs(xm) >= eps:
                prod *= 1 - xm
                xm *= pm
            return complex(prod)
    prod = 1 + 0j
    while abs(x) >= EPS:
        prod *= 1 - x
        x *= p
    return prod


def pochhammer_double(x, p, q) -> complex:
    """``(x; p, q)_inf = prod_{m,n>=0} (1 - p^m q^n x)``."""
    x, p, q = complex(x), complex(p), complex(q)
    if abs(p) >= 1 or abs(q) >= 1:
        raise DomainError(f"|p| and |q| must be < 1, got {abs(p)}, {abs(q)}")
    eps = 10.0 ** (-EXTENDED_DPS) if current_precision() == "extended" else EPS
    prod = 1 + 0j
    col = x
    while abs(col) >= eps:
        prod *= pochhammer(col, p)
        col *= q
    return prod

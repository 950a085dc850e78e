"""Spin-l representations of the Sklyanin algebra, L operators and R matrices.

Elements of ``V^l`` (even theta functions of order ``4l``) are handled as
coefficient vectors in a fixed ordered basis.  Each basis function has a
closed-form evaluator, so a difference operator is turned into a matrix by
sampling it at a handful of points and solving the overdetermined system in
the least-squares sense.

For ``l = 1/2`` the basis is the pair ``theta00(2y; 2tau) -+ theta10(2y; 2tau)``
which identifies ``V^{1/2}`` with ``C^2`` so that the generators become
Pauli matrices.  For higher spin the basis is a set of intertwining vectors
at a pseudo-randomly drawn generic reference point.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DegenerateBasisError, ExpansionError, PoleError
from .operators import OperatorMatrix, TensorLabel
from .theta import ModularParams, current_precision, theta

DEFAULT_SEED = 20240611
POLE_GUARD = 1e-13
COND_LIMIT = 1e10
EXPANSION_RTOL = 1e-9
MAX_RESAMPLES = 8

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
# theta characteristic attached to each generator index a = 0..3
WEIGHT_CHARS = ("11", "10", "00", "01")


@dataclass(frozen=True, order=True)
class Spin:
    twice_l: int

    def __post_init__(self):
        if self.twice_l < 0:
            raise ValueError("spin must be non-negative")

    @classmethod
    def parse(cls, value) -> "Spin":
        if isinstance(value, Spin):
            return value
        frac = Fraction(value) if not isinstance(value, float) else Fraction(value).limit_denominator(2)
        if (2 * frac).denominator != 1:
            raise ValueError(f"spin must be a half-integer, got {value}")
        return cls(int(2 * frac))

    @property
    def l(self) -> Fraction:
        return Fraction(self.twice_l, 2)

    @property
    def dim(self) -> int:
        return self.twice_l + 1

    @property
    def weights(self) -> list[Fraction]:
        """``m = -l, -l+1, ..., l``."""
        return [Fraction(k - self.twice_l, 2) for k in range(0, 2 * self.twice_l + 1, 2)]

    def __str__(self):
        return str(self.l)


def guard(value, what: str) -> complex:
    """Return ``value`` unless it is numerically zero, in which case raise."""
    if abs(value) < POLE_GUARD:
        raise PoleError(f"{what} vanishes ({abs(value):.3e})")
    return value


# --- closed-form functions on V^l ------------------------------------------


def pair_factor(x, y, tau):
    """``theta10(y + x) theta10(y - x)``, the building block of intertwiners."""
    y = np.asarray(y, dtype=complex)
    return theta("10", y + x, tau) * theta("10", y - x, tau)


def intertwiner_shifts(twice_l: int, twice_m: int, lam, lam_prime, u, eta) -> list[complex]:
    """Arguments ``x`` of the pair factors making up an outgoing intertwiner.

    ``lam - lam_prime = 4 m eta``.  There are ``l+m`` factors built on
    ``(lam+u)/2`` and ``l-m`` on ``(lam-u)/2``; ``lam_prime`` only enters
    through ``m``.
    """
    n_plus = (twice_l + twice_m) // 2
    n_minus = (twice_l - twice_m) // 2
    xs = []
    for j in range(1, n_plus + 1):
        xs.append((lam + u) / 2 - (2 * j - 1 - twice_l / 2) * eta)
    for j in range(1, n_minus + 1):
        xs.append((lam - u) / 2 + (2 * j - 1 - twice_l / 2) * eta)
    return xs


def product_of_pairs(xs, y, tau):
    out = np.ones_like(np.asarray(y, dtype=complex))
    for x in xs:
        out = out * pair_factor(x, y, tau)
    return out


def _identify_basis(tau) -> list[Callable]:
    return [
        lambda y: theta("00", 2 * np.asarray(y), 2 * tau) - theta("10", 2 * np.asarray(y), 2 * tau),
        lambda y: theta("00", 2 * np.asarray(y), 2 * tau) + theta("10", 2 * np.asarray(y), 2 * tau),
    ]


def _s_aux(a: int, y, params: ModularParams):
    ch = WEIGHT_CHARS[a]
    pre = 1j if a == 2 else 1.0
    return pre * theta(ch, params.eta, params.tau) * theta(ch, 2 * np.asarray(y), params.tau)


def apply_generator(a: int, twice_l: int, func: Callable, y, params: ModularParams):
    """Evaluate ``(rho^l(S^a) f)(y)`` from the difference-operator formula."""
    y = np.asarray(y, dtype=complex)
    l_eta = twice_l / 2 * params.eta
    num = _s_aux(a, y - l_eta, params) * func(y + params.eta) - _s_aux(a, -y - l_eta, params) * func(y - params.eta)
    return num / theta("11", 2 * y, params.tau)


# --- the representation -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class SklyaninRep:
    """Matrices of ``rho^l(S^a)`` in a fixed ordered basis of ``V^l``."""

    spin: Spin
    params: ModularParams
    s_matrices: tuple[np.ndarray, ...]
    j_constants: dict
    basis_meta: dict = field(repr=False)
    _basis: tuple = field(repr=False)
    _samples: np.ndarray = field(repr=False)
    _eval_matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.spin.dim

    def evaluate_basis(self, y) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        return np.stack([f(y) for f in self._basis], axis=1)

    def coords_from_samples(self, values) -> np.ndarray:
        """Coordinates of the function whose values at the sample points are ``values``."""
        values = np.asarray(values, dtype=complex)
        coef, *_ = np.linalg.lstsq(self._eval_matrix, values, rcond=None)
        resid = np.linalg.norm(self._eval_matrix @ coef - values)
        scale = np.linalg.norm(values)
        if resid > EXPANSION_RTOL * max(scale, 1e-300):
            raise ExpansionError(f"function is not in V^{self.spin} (relative residual {resid / scale:.2e})")
        return coef

    def coords(self, func: Callable) -> np.ndarray:
        return self.coords_from_samples(func(self._samples))

    @property
    def samples(self) -> np.ndarray:
        return self._samples


def _draw_reference(rng, params):
    lam = complex(rng.uniform(0.1, 0.9), rng.uniform(-0.2, 0.2) * params.tau.imag)
    u = complex(rng.uniform(0.1, 0.9), rng.uniform(-0.2, 0.2) * params.tau.imag)
    return lam, u


def _draw_samples(rng, n, params):
    re = rng.uniform(0.0, 1.0, size=n)
    im = rng.uniform(-0.25, 0.25, size=n) * params.tau.imag
    return re + 1j * im


def _intertwiner_basis(twice_l, lam_ref, u_ref, params):
    funcs = []
    for k in range(twice_l + 1):
        twice_m = 2 * k - twice_l
        lam = lam_ref + 2 * twice_m * params.eta
        xs = intertwiner_shifts(twice_l, twice_m, lam, lam_ref, u_ref, params.eta)
        funcs.append(functools.partial(product_of_pairs, xs, tau=params.tau))
    return funcs


def structure_constants(params: ModularParams, u=None) -> dict:
    """``J`` attached to each relation ``[S^al, S^0] = -i J [S^be, S^ga]_+``.

    Keys are ``"12", "23", "31"`` (the relation with ``alpha = 1, 2, 3``).
    The value for ``alpha`` is ``(W_be^2 - W_ga^2) / (W_al^2 - W_0^2)``, which
    does not depend on the spectral parameter.
    """
    if u is None:
        u = 0.2345 + 0.1234j
    w = [theta(ch, u, params.tau) / guard(theta(ch, params.eta, params.tau), f"theta{ch}(eta)") for ch in WEIGHT_CHARS]
    sq = [x * x for x in w]
    out = {}
    for al, be, ga in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        out[f"{al}{be}"] = (sq[be] - sq[ga]) / guard(sq[al] - sq[0], "structure-constant denominator")
    return out


def spin_rep(spin, params: ModularParams, seed: int = DEFAULT_SEED) -> SklyaninRep:
    """Build the spin-``l`` representation.

    The reference point and sample points are drawn from ``seed``; a draw
    whose basis evaluation matrix is ill-conditioned is replaced, up to
    ``MAX_RESAMPLES`` times.  Results are memoized per precision mode.
    """
    return _spin_rep(Spin.parse(spin), params, seed, current_precision())


@functools.lru_cache(maxsize=64)
def _spin_rep(spin: Spin, params: ModularParams, seed: int, _mode: str) -> SklyaninRep:
    twice_l = spin.twice_l
    n_samples = 2 * twice_l + 3
    rng = np.random.default_rng(seed)
    last_cond = np.inf
    for attempt in range(MAX_RESAMPLES + 1):
        samples = _draw_samples(rng, n_samples, params)
        if twice_l == 1:
            basis = _identify_basis(params.tau)
            meta = {"kind": "identification"}
        else:
            lam_ref, u_ref = _draw_reference(rng, params)
            basis = _intertwiner_basis(twice_l, lam_ref, u_ref, params)
            meta = {"kind": "intertwiner", "lambda_ref": lam_ref, "u_ref": u_ref}
        emat = np.stack([f(samples) for f in basis], axis=1)
        last_cond = np.linalg.cond(emat)
        if last_cond < COND_LIMIT:
            break
    else:
        raise DegenerateBasisError(f"no generic basis for spin {spin} after {MAX_RESAMPLES} resamples (cond {last_cond:.2e})")
    meta.update({"seed": seed, "attempts": attempt + 1, "samples": tuple(samples), "condition": float(last_cond)})

    mats = []
    for a in range(4):
        cols = []
        for k, f in enumerate(basis):
            vals = apply_generator(a, twice_l, f, samples, params)
            coef, *_ = np.linalg.lstsq(emat, vals, rcond=None)
            resid = np.linalg.norm(emat @ coef - vals)
            # an image that cancels to zero is measured against the input's size
            if resid > EXPANSION_RTOL * max(np.linalg.norm(vals), np.linalg.norm(emat[:, k])):
                raise ExpansionError(f"S^{a} image left V^{spin}: residual {resid:.2e}")
            cols.append(coef)
        mat = np.array(cols).T
        mat.setflags(write=False)
        mats.append(mat)
    emat.setflags(write=False)
    return SklyaninRep(
        spin=spin,
        params=params,
        s_matrices=tuple(mats),
        j_constants=structure_constants(params),
        basis_meta=meta,
        _basis=tuple(basis),
        _samples=samples,
        _eval_matrix=emat,
    )


def comm_rel_residuals(rep: SklyaninRep) -> dict[str, float]:
    """Residuals of the six defining quadratic relations, scaled by ``max ||S^a||^2``."""
    S = rep.s_matrices
    scale = max(1.0, max(np.linalg.norm(s) ** 2 for s in S))
    out = {}
    for al, be, ga in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        J = rep.j_constants[f"{al}{be}"]
        first = S[al] @ S[0] - S[0] @ S[al] + 1j * J * (S[be] @ S[ga] + S[ga] @ S[be])
        second = S[al] @ S[be] - S[be] @ S[al] - 1j * (S[0] @ S[ga] + S[ga] @ S[0])
        out[f"[S{al},S0]"] = float(np.linalg.norm(first) / scale)
        out[f"[S{al},S{be}]"] = float(np.linalg.norm(second) / scale)
    return out


# --- L operator and R matrices ----------------------------------------------


def weights_l(u, params: ModularParams) -> tuple[complex, ...]:
    """``W_a^L(u) = theta_{c_a}(u) / (2 theta11(2 eta) theta_{c_a}(eta))``."""
    t2 = guard(theta("11", 2 * params.eta, params.tau), "theta11(2 eta)")
    return tuple(
        theta(ch, u, params.tau) / (2 * t2 * guard(theta(ch, params.eta, params.tau), f"theta{ch}(eta)"))
        for ch in WEIGHT_CHARS
    )


def weights_r(u, params: ModularParams) -> tuple[complex, ...]:
    t2 = theta("11", 2 * params.eta, params.tau)
    return tuple(t2 * w for w in weights_l(u + params.eta, params))


@dataclass(frozen=True, eq=False)
class LOperator:
    spin: Spin
    u: complex
    matrix: np.ndarray
    weights: tuple[complex, ...]

    def blocks(self) -> np.ndarray:
        """The ``2 x 2`` array of ``V^l`` operators (auxiliary index outermost)."""
        d = self.spin.dim
        return self.matrix.reshape(2, d, 2, d).transpose(0, 2, 1, 3)


@dataclass(frozen=True, eq=False)
class BaxterR:
    u: complex
    matrix: np.ndarray
    weights: tuple[complex, ...]


def l_operator(rep: SklyaninRep, u) -> LOperator:
    u = complex(u)
    w = weights_l(u, rep.params)
    mat = sum(w[a] * np.kron(SIGMA[a], rep.s_matrices[a]) for a in range(4))
    mat.setflags(write=False)
    return LOperator(rep.spin, u, mat, w)


def baxter_r(u, params: ModularParams) -> BaxterR:
    u = complex(u)
    w = weights_r(u, params)
    mat = sum(w[a] * np.kron(SIGMA[a], SIGMA[a]) for a in range(4))
    mat.setflags(write=False)
    return BaxterR(u, mat, w)


def swap_matrix(d1: int, d2: int) -> np.ndarray:
    """Permutation ``V1 (x) V2 -> V2 (x) V1`` on kron-ordered coordinates."""
    perm = np.zeros((d1 * d2, d1 * d2))
    for i in range(d1):
        for j in range(d2):
            perm[j * d1 + i, i * d2 + j] = 1.0
    return perm


def r_half_l(rep: SklyaninRep, u) -> OperatorMatrix:
    """``R^{1/2,l}(u)`` on ``C^2 (x) V^l``, normalized by the L-operator formula."""
    u = complex(u)
    p = rep.params
    norm = theta("11", 2 * p.eta, p.tau) / guard(
        theta("11", u + (rep.spin.twice_l + 1) * p.eta, p.tau), "theta11(u + (2l+1) eta)"
    )
    mat = norm * l_operator(rep, u + p.eta).matrix
    label = TensorLabel((1, rep.spin.twice_l))
    return OperatorMatrix(mat, label, label)


def r_l_half(rep: SklyaninRep, u) -> OperatorMatrix:
    """``R^{l,1/2}(u)`` on ``V^l (x) C^2``: the factor-swapped ``R^{1/2,l}(u)``."""
    d = rep.dim
    perm = swap_matrix(2, d)
    mat = perm @ r_half_l(rep, u).matrix @ perm.T
    label = TensorLabel((rep.spin.twice_l, 1))
    return OperatorMatrix(mat, label, label)


def r_matrix(twice_l1: int, twice_l2: int, u, params: ModularParams, seed: int = DEFAULT_SEED) -> OperatorMatrix:
    """``R^{l1,l2}(u)`` for pairs where at least one spin is ``1/2``."""
    if twice_l1 == 1:
        return r_half_l(spin_rep(Spin(twice_l2), params, seed), u)
    if twice_l2 == 1:
        return r_l_half(spin_rep(Spin(twice_l1), params, seed), u)
    raise NotImplementedError("R matrices with both spins above 1/2 are not constructed")


# --- defining identities ----------------------------------------------------


def _rel(lhs, rhs) -> float:
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300))


def _on_aux(op: np.ndarray, d: int, first: bool) -> np.ndarray:
    """Lift an operator on ``C^2 (x) V`` to ``C^2 (x) C^2 (x) V`` via one auxiliary factor."""
    m = op.reshape(2, d, 2, d)
    eye = np.eye(2)
    spec = "iakb,jl->ijaklb" if first else "jakb,il->ijalkb"
    return np.einsum(spec, m, eye).reshape(4 * d, 4 * d)


def rll_residual(rep: SklyaninRep, u, v) -> float:
    """``R_12(u-v) L_13(u) L_23(v) = L_23(v) L_13(u) R_12(u-v)``."""
    d = rep.dim
    R = np.kron(baxter_r(complex(u) - complex(v), rep.params).matrix, np.eye(d))
    L1 = _on_aux(l_operator(rep, u).matrix, d, True)
    L2 = _on_aux(l_operator(rep, v).matrix, d, False)
    return _rel(R @ L1 @ L2, L2 @ L1 @ R)


def _r13(R: np.ndarray) -> np.ndarray:
    return np.einsum("ikjl,bc->ibkjcl", R.reshape(2, 2, 2, 2), np.eye(2)).reshape(8, 8)


def yang_baxter_residual(params: ModularParams, u, v) -> float:
    """``R_12(u-v) R_13(u) R_23(v) = R_23(v) R_13(u) R_12(u-v)``."""
    u, v = complex(u), complex(v)
    r12 = np.kron(baxter_r(u - v, params).matrix, np.eye(2))
    r13 = _r13(baxter_r(u, params).matrix)
    r23 = np.kron(np.eye(2), baxter_r(v, params).matrix)
    return _rel(r12 @ r13 @ r23, r23 @ r13 @ r12)


def unitarity_residual(rep: SklyaninRep, u) -> float:
    """``R^{1/2,l}_12(u) R^{l,1/2}_21(-u) = 1`` on ``C^2 (x) V^l``."""
    perm = swap_matrix(2, rep.dim)
    prod = r_half_l(rep, u).matrix @ perm.T @ r_l_half(rep, -complex(u)).matrix @ perm
    eye = np.eye(2 * rep.dim)
    return float(np.linalg.norm(prod - eye) / np.linalg.norm(eye))


def pauli_residual(params: ModularParams, seed: int = DEFAULT_SEED) -> float:
    """Spin-1/2 generators against ``theta11(2 eta) sigma^a``."""
    rep = spin_rep(Spin(1), params, seed)
    t2 = theta("11", 2 * params.eta, params.tau)
    return max(float(np.linalg.norm(rep.s_matrices[a] - t2 * SIGMA[a]) / abs(t2)) for a in range(4))

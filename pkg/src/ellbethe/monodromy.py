"""Monodromy matrices, their gauge-twisted entries and Bethe vectors.

Operators act on the full chain space ``H``; the auxiliary ``C^2`` index is
kept explicit as the leading ``2 x 2`` block structure, so a monodromy
matrix is an array of shape ``(2, 2, D, D)`` with ``D = dim H``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .bethe import ChainConfig, BetheElement, expand_sectors, path_vector_coords
from .errors import PoleError
from .intertwiner import alpha_l, delta_l, gauge_matrix
from .sklyanin import Spin, guard, l_operator, spin_rep
from .theta import theta


def _lift(block: np.ndarray, dims, site: int) -> np.ndarray:
    left = int(np.prod(dims[:site])) if site else 1
    right = int(np.prod(dims[site + 1 :])) if site + 1 < len(dims) else 1
    return np.kron(np.kron(np.eye(left), block), np.eye(right))


def _block_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("ijab,jkbc->ikac", x, y)


@dataclass(frozen=True, eq=False)
class Monodromy:
    u: complex
    config: ChainConfig
    blocks: np.ndarray

    @property
    def A(self):
        return self.blocks[0, 0]

    @property
    def B(self):
        return self.blocks[0, 1]

    @property
    def C(self):
        return self.blocks[1, 0]

    @property
    def D(self):
        return self.blocks[1, 1]

    def full(self) -> np.ndarray:
        """The operator on ``C^2 (x) H``."""
        return np.block([[self.A, self.B], [self.C, self.D]])


@dataclass(frozen=True, eq=False)
class TwistedMonodromy(Monodromy):
    a: int = 0
    a_prime: int = 0


def site_l_operator(config: ChainConfig, site: int, u) -> np.ndarray:
    """``L_j(u - z_j)`` lifted to ``(2, 2, D, D)`` blocks (0-based ``site``)."""
    rep = spin_rep(Spin(config.twice_spins[site]), config.params, config.seed)
    arg = complex(u) - config.z[site]
    try:
        blocks = l_operator(rep, arg).blocks()
    except PoleError as exc:
        raise PoleError(f"site {site + 1}: {exc}") from exc
    dims = config.dims
    return np.array([[_lift(blocks[i, k], dims, site) for k in range(2)] for i in range(2)])


def monodromy(u, config: ChainConfig) -> Monodromy:
    """``T(u) = L_N(u - z_N) ... L_1(u - z_1)``."""
    out = site_l_operator(config, 0, u)
    for site in range(1, config.n_sites):
        out = _block_product(site_l_operator(config, site, u), out)
    out.setflags(write=False)
    return Monodromy(complex(u), config, out)


def twisted_monodromy(a: int, a_prime: int, u, config: ChainConfig) -> TwistedMonodromy:
    """``M_lam(u)^{-1} T(u) M_lam'(u)`` with ``lam = lambda_ring + 2 a eta``."""
    T = monodromy(u, config)
    g = gauge_matrix(config.level(a), u, config.params)
    g_prime = gauge_matrix(config.level(a_prime), u, config.params)
    tw = np.einsum("ij,jkab,kl->ilab", g.m_inv, T.blocks, g_prime.m)
    tw.setflags(write=False)
    return TwistedMonodromy(complex(u), config, tw, a, a_prime)


def vacuum_path(a: int, config: ChainConfig) -> tuple[int, ...]:
    path = [a]
    for t in config.twice_spins:
        path.append(path[-1] + t)
    return tuple(path)


def global_pseudo_vacuum(a: int, config: ChainConfig) -> np.ndarray:
    """``Omega_a``: local pseudo-vacua along ``a_j = a + 2(l_1 + ... + l_j)``."""
    return path_vector_coords(vacuum_path(a, config), config)


def b_chain(t, a: int, config: ChainConfig) -> np.ndarray:
    """``B_{a+1,a-1}(t_1) ... B_{a+M,a-M}(t_M) Omega_{a-M}`` in ``H``."""
    m = len(t)
    vec = global_pseudo_vacuum(a - m, config)
    for k in range(m, 0, -1):
        vec = twisted_monodromy(a + k, a - k, t[k - 1], config).B @ vec
    return vec


def bethe_psi(t, config: ChainConfig, origin: int = 0) -> BetheElement:
    """The Bethe vector ``Psi(t)`` expanded in the Bethe basis.

    The sum over ``a`` runs over ``origin .. origin + r - 1``; every term lies
    in the sector ``a mod r``.
    """
    t = tuple(complex(x) for x in t)
    if len(t) != config.big_m:
        raise ValueError(f"Psi needs M = {config.big_m} arguments, got {len(t)}")
    parts = {}
    for a in range(origin, origin + config.r):
        parts[a % config.r] = b_chain(t, a, config)
    return expand_sectors(config, parts)


# --- scalar weights ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ScalarWeights:
    config: ChainConfig

    def alpha_l(self, spin, u) -> complex:
        return alpha_l(spin, u, self.config.params)

    def delta_l(self, spin, u) -> complex:
        return delta_l(spin, u, self.config.params)

    def alpha_ex(self, u) -> complex:
        """``theta11(u - 2 eta) / theta11(u)``."""
        p = self.config.params
        return theta("11", u - 2 * p.eta, p.tau) / guard(theta("11", u, p.tau), "theta11(u)")

    def beta_ex(self, a: int, u) -> complex:
        """``theta11(u - lam_a) theta11(2 eta) / (theta11(u) theta11(lam_a))``."""
        p = self.config.params
        lam = self.config.lam(a)
        den = guard(theta("11", u, p.tau), "theta11(u)") * guard(theta("11", lam, p.tau), "theta11(lambda)")
        return theta("11", u - lam, p.tau) * theta("11", 2 * p.eta, p.tau) / den


def scalar_weights(config: ChainConfig) -> ScalarWeights:
    return ScalarWeights(config)


# --- splitting into two sub-chains -----------------------------------------


def split_b(u, a: int, a_prime: int, b: int, config: ChainConfig, n: int) -> np.ndarray:
    """``A^R_{a,b} B^L_{b,a'} + B^R_{a,b} D^L_{b,a'}`` for the split after site ``n``."""
    left = twisted_monodromy(b, a_prime, u, config.sub(1, n))
    right = twisted_monodromy(a, b, u, config.sub(n + 1, config.n_sites))
    return np.kron(left.B, right.A) + np.kron(left.D, right.B)


def two_side_lhs(t, a: int, config: ChainConfig) -> np.ndarray:
    """``B_{a_N-m+1, a_0+m-1}(t_m) ... B_{a_N, a_0}(t_1) Omega_a``."""
    a_n_end = vacuum_path(a, config)[-1]
    vec = global_pseudo_vacuum(a, config)
    for k in range(1, len(t) + 1):
        vec = twisted_monodromy(a_n_end - k + 1, a + k - 1, t[k - 1], config).B @ vec
    return vec


def two_side_rhs(t, a: int, config: ChainConfig, n: int, pair_factor=None) -> np.ndarray:
    """Sum over partitions ``{1..m} = I + II`` of products on the two sub-chains.

    Indices in ``I`` are created on sites ``n+1..N`` through ``A`` and on
    ``1..n`` through ``B``; indices in ``II`` the other way round.
    ``pair_factor(t_i, t_i')`` weighs each pair ``i in I, i' in II``.
    """
    m = len(t)
    path = vacuum_path(a, config)
    a0, an, aN = path[0], path[n], path[-1]
    left_cfg = config.sub(1, n)
    right_cfg = config.sub(n + 1, config.n_sites)
    w = scalar_weights(config)
    if pair_factor is None:
        pair_factor = lambda x, y: w.alpha_ex(x - y)  # noqa: E731
    total = 0
    for mask in itertools.product((0, 1), repeat=m):
        part_i = [k for k in range(m) if mask[k] == 0]
        part_ii = [k for k in range(m) if mask[k] == 1]
        ni, nii = len(part_i), len(part_ii)
        coef = 1.0 + 0j
        for i in part_i:
            for ip in part_ii:
                coef *= pair_factor(t[i], t[ip])
            for k in range(n, config.n_sites):
                coef *= w.alpha_l(config.spins[k], t[i] - config.z[k])
        for ip in part_ii:
            for k in range(n):
                coef *= w.delta_l(config.spins[k], t[ip] - config.z[k])
        left = global_pseudo_vacuum(a0 + nii, left_cfg)
        for k in range(ni, 0, -1):
            left = twisted_monodromy(an - ni + nii + k, a0 + m - k, t[part_i[k - 1]], left_cfg).B @ left
        right = global_pseudo_vacuum(an - ni, right_cfg)
        for k in range(nii, 0, -1):
            right = twisted_monodromy(aN - m + k, an - ni + nii - k, t[part_ii[k - 1]], right_cfg).B @ right
        total = total + coef * np.kron(left, right)
    return total


def exchange_residuals(config: ChainConfig, u, v, a: int, a_prime: int) -> dict[str, float]:
    """Relative residuals of the B-B, A-B and D-B exchange relations.

    The ``beta`` terms enter as ``-beta_{a'}`` in the A-B relation and
    ``+beta_a`` in the D-B relation.
    """
    w = scalar_weights(config)

    def tw(x, y, s):
        return twisted_monodromy(x, y, s, config)

    def rel(lhs, rhs):
        return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300))

    out = {}
    out["B-B"] = rel(tw(a, a_prime + 1, u).B @ tw(a + 1, a_prime, v).B, tw(a, a_prime + 1, v).B @ tw(a + 1, a_prime, u).B)
    lhs = tw(a, a_prime + 1, u).A @ tw(a + 1, a_prime, v).B
    rhs = w.alpha_ex(u - v) * tw(a, a_prime - 1, v).B @ tw(a + 1, a_prime, u).A - w.beta_ex(a_prime, u - v) * tw(
        a, a_prime - 1, u
    ).B @ tw(a + 1, a_prime, v).A
    out["A-B"] = rel(lhs, rhs)
    lhs = tw(a - 1, a_prime, u).D @ tw(a, a_prime - 1, v).B
    rhs = w.alpha_ex(v - u) * tw(a + 1, a_prime, v).B @ tw(a, a_prime - 1, u).D + w.beta_ex(a, u - v) * tw(
        a + 1, a_prime, u
    ).B @ tw(a, a_prime - 1, v).D
    out["D-B"] = rel(lhs, rhs)
    return out


def vacuum_residuals(config: ChainConfig, u, a: int) -> dict[str, float]:
    """Residuals of ``A``, ``C`` and ``D`` of ``T_{a+2M, a}(u)`` on ``Omega_a``."""
    w = scalar_weights(config)
    big_m2 = sum(config.twice_spins)
    om = global_pseudo_vacuum(a, config)
    T = twisted_monodromy(a + big_m2, a, u, config)
    a_val = np.prod([w.alpha_l(s, u - z) for s, z in zip(config.spins, config.z)])
    d_val = np.prod([w.delta_l(s, u - z) for s, z in zip(config.spins, config.z)])
    lower, upper = global_pseudo_vacuum(a - 1, config), global_pseudo_vacuum(a + 1, config)
    return {
        "A": float(np.linalg.norm(T.A @ om - a_val * lower) / np.linalg.norm(a_val * lower)),
        "C": float(np.linalg.norm(T.C @ om) / np.linalg.norm(om)),
        "D": float(np.linalg.norm(T.D @ om - d_val * upper) / np.linalg.norm(d_val * upper)),
    }

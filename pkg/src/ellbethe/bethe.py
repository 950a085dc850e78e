"""Path vectors, the space of Bethe vectors, the boundary operator and R-check.

A Bethe vector is a function of ``nu`` in ``Z/rZ`` with values in the chain
space ``H``.  The basis elements ``e^{2 pi i a nu eta} |a_0, ..., a_N>`` with
``a_0 = a_N = a`` in ``0..r-1`` are independent because the phase separates
the sectors labelled by ``a``; inside a sector the path vectors are
generically independent in ``H`` itself.  Coefficients are therefore
independent of ``nu`` and all operators here act on coefficient vectors.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import ExpansionError, LatticeError
from .intertwiner import Level, intertwiner, is_admissible
from .operators import BetheLabel, OperatorMatrix, TensorLabel
from .sklyanin import DEFAULT_SEED, Spin, r_matrix, spin_rep, swap_matrix
from .theta import ModularParams

EXPANSION_RTOL = 1e-8


@dataclass(frozen=True)
class ChainConfig:
    """The full problem instance for a chain of ``N`` sites.

    ``twice_spins`` holds ``2 l_j``.  ``open_chain`` lifts the requirement
    that ``M = sum l_j`` be an integer, which is only needed for the Bethe
    space; sub-chains used in splitting formulas are open.
    """

    twice_spins: tuple[int, ...]
    z: tuple[complex, ...]
    params: ModularParams
    lambda_ring: complex = 0.0
    kappa: complex = 0.0
    c: complex = 0.0
    nu: int = 0
    seed: int = DEFAULT_SEED
    open_chain: bool = False

    def __post_init__(self):
        ts = tuple(int(t) for t in self.twice_spins)
        zs = tuple(complex(w) for w in self.z)
        object.__setattr__(self, "twice_spins", ts)
        object.__setattr__(self, "z", zs)
        object.__setattr__(self, "lambda_ring", complex(self.lambda_ring))
        object.__setattr__(self, "kappa", complex(self.kappa))
        object.__setattr__(self, "c", complex(self.c))
        if len(ts) < 1:
            raise ValueError("a chain needs at least one site")
        if len(ts) != len(zs):
            raise ValueError("one spectral parameter per site is required")
        if any(t < 1 for t in ts):
            raise ValueError("all spins must be at least 1/2")
        if not self.open_chain and sum(ts) % 2:
            raise ValueError(f"M = {Fraction(sum(ts), 2)} is not an integer")
        object.__setattr__(self, "nu", int(self.nu) % self.params.r)

    @classmethod
    def build(cls, spins, z, params, **kw) -> "ChainConfig":
        return cls(tuple(Spin.parse(s).twice_l for s in spins), tuple(z), params, **kw)

    @property
    def n_sites(self) -> int:
        return len(self.twice_spins)

    @property
    def spins(self) -> tuple[Spin, ...]:
        return tuple(Spin(t) for t in self.twice_spins)

    @property
    def big_m(self) -> int:
        if sum(self.twice_spins) % 2:
            raise ValueError("M is not an integer for this chain")
        return sum(self.twice_spins) // 2

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def label(self) -> BetheLabel:
        return BetheLabel(self.twice_spins, self.z, self.lambda_ring, self.r)

    @property
    def tensor_label(self) -> TensorLabel:
        return TensorLabel(self.twice_spins)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(t + 1 for t in self.twice_spins)

    def level(self, a: int) -> Level:
        return Level(self.lambda_ring, a)

    def lam(self, a: int) -> complex:
        return self.level(a).value(self.params.eta)

    def with_sites(self, twice_spins, z) -> "ChainConfig":
        return replace(self, twice_spins=tuple(twice_spins), z=tuple(z))

    def shifted(self, j: int) -> "ChainConfig":
        """``z_j -> z_j + kappa`` (1-based ``j``)."""
        z = list(self.z)
        z[j - 1] = z[j - 1] + self.kappa
        return self.with_sites(self.twice_spins, z)

    def swapped(self, j: int) -> "ChainConfig":
        """Exchange sites ``j`` and ``j+1`` (spins and spectral parameters)."""
        ts, z = list(self.twice_spins), list(self.z)
        ts[j - 1], ts[j] = ts[j], ts[j - 1]
        z[j - 1], z[j] = z[j], z[j - 1]
        return self.with_sites(ts, z)

    def rotated(self) -> "ChainConfig":
        """Target of the boundary operator: last site moved to the front, ``z_N -> z_N + kappa``."""
        ts = (self.twice_spins[-1],) + self.twice_spins[:-1]
        z = (self.z[-1] + self.kappa,) + self.z[:-1]
        return self.with_sites(ts, z)

    def sub(self, start: int, stop: int) -> "ChainConfig":
        """Sites ``start..stop`` (1-based, inclusive) as an open chain."""
        return replace(
            self,
            twice_spins=self.twice_spins[start - 1 : stop],
            z=self.z[start - 1 : stop],
            open_chain=True,
        )


@dataclass(frozen=True)
class PathVector:
    """The tensor product of intertwiners along ``a_0, ..., a_N``."""

    a: tuple[int, ...]
    coefficient: complex = 1.0

    def check(self, config: ChainConfig):
        if len(self.a) != config.n_sites + 1:
            raise LatticeError(f"path {self.a} has the wrong length for {config.n_sites} sites")
        for j, t in enumerate(config.twice_spins):
            if not is_admissible(Spin(t), self.a[j] - self.a[j + 1]):
                raise LatticeError(f"path {self.a} violates admissibility at site {j + 1}")

    def shift(self, k: int) -> "PathVector":
        return PathVector(tuple(x + k for x in self.a), self.coefficient)


def path_vector_coords(path, config: ChainConfig) -> np.ndarray:
    """Coordinates of the path vector in the product of the fixed ``V^{l_j}`` bases."""
    if not isinstance(path, PathVector):
        path = PathVector(tuple(path))
    path.check(config)
    return path.coefficient * _path_coords(path.a, config.twice_spins, config.z, config.lambda_ring, config.params, config.seed)


@functools.lru_cache(maxsize=4096)
def _path_coords(a, twice_spins, z, lambda_ring, params, seed):
    out = np.ones(1, dtype=complex)
    for j, t in enumerate(twice_spins):
        vec = intertwiner(Spin(t), Level(lambda_ring, a[j]), Level(lambda_ring, a[j + 1]), z[j], params, seed)
        out = np.kron(out, vec.coords)
    out.setflags(write=False)
    return out


def weight_zero_count(twice_spins) -> int:
    """Number of tuples ``(m_1, ..., m_N)`` of weights summing to zero."""
    counts = {0: 1}
    for t in twice_spins:
        nxt: dict[int, int] = {}
        for s, n in counts.items():
            for tm in range(-t, t + 1, 2):
                nxt[s + tm] = nxt.get(s + tm, 0) + n
        counts = nxt
    return counts.get(0, 0)


@dataclass(frozen=True, eq=False)
class BetheBasis:
    config: ChainConfig
    elements: tuple[tuple[int, ...], ...]
    _index: dict = field(repr=False)

    def __len__(self):
        return len(self.elements)

    @property
    def label(self) -> BetheLabel:
        return self.config.label

    def index(self, path) -> int:
        return self._index[tuple(path)]

    def sector(self, a: int) -> list[int]:
        return [k for k, p in enumerate(self.elements) if p[0] == a]

    def phase(self, k: int, nu=None) -> complex:
        nu = self.config.nu if nu is None else nu
        a = self.elements[k][0]
        return complex(np.exp(2j * np.pi * a * nu * self.config.params.eta))

    def canonical(self, path) -> tuple[int, ...]:
        """Shift a closed path by a multiple of ``r`` so that it starts in ``0..r-1``."""
        r = self.config.r
        k = (path[0] // r) * r
        return tuple(x - k for x in path)


def enumerate_basis(config: ChainConfig) -> BetheBasis:
    """Closed admissible paths, ordered lexicographically by ``(a, a_1, ..., a_{N-1})``."""
    return _enumerate(config)


@functools.lru_cache(maxsize=256)
def _enumerate(config: ChainConfig) -> BetheBasis:
    config.big_m  # closed paths exist only for integral M
    elems = []
    steps = [range(-t, t + 1, 2) for t in config.twice_spins[:-1]]
    last = config.twice_spins[-1]
    for a in range(config.r):
        for ms in itertools.product(*steps):
            path = [a]
            for tm in ms:
                path.append(path[-1] - tm)
            if is_admissible(Spin(last), path[-1] - a):
                elems.append(tuple(path) + (a,))
    elems.sort()
    return BetheBasis(config, tuple(elems), {p: k for k, p in enumerate(elems)})


@dataclass(frozen=True, eq=False)
class BetheElement:
    basis: BetheBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (len(self.basis),):
            raise ValueError(f"expected {len(self.basis)} coefficients, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def label(self) -> BetheLabel:
        return self.basis.label

    def to_h(self, nu=None) -> np.ndarray:
        """The value ``f(nu)`` in ``H``."""
        cfg = self.basis.config
        out = np.zeros(int(np.prod(cfg.dims)), dtype=complex)
        for k, path in enumerate(self.basis.elements):
            if self.coeffs[k] != 0:
                out += self.coeffs[k] * self.basis.phase(k, nu) * path_vector_coords(path, cfg)
        return out

    def __add__(self, other):
        if not self.label.matches(other.label):
            raise ValueError("cannot add Bethe vectors from different spaces")
        return BetheElement(self.basis, self.coeffs + other.coeffs)

    def scaled(self, s) -> "BetheElement":
        return BetheElement(self.basis, s * self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def sector_matrix(config: ChainConfig, a: int) -> np.ndarray:
    """Columns: ``H`` coordinates of the basis paths of sector ``a``."""
    basis = enumerate_basis(config)
    cols = [path_vector_coords(basis.elements[k], config) for k in basis.sector(a)]
    return np.array(cols).T


def expand_in_sector(config: ChainConfig, a: int, vec) -> tuple[np.ndarray, float]:
    """Least-squares coordinates of an ``H`` vector in the sector-``a`` paths."""
    A = sector_matrix(config, a)
    vec = np.asarray(vec, dtype=complex)
    coef, *_ = np.linalg.lstsq(A, vec, rcond=None)
    scale = np.linalg.norm(vec)
    resid = float(np.linalg.norm(A @ coef - vec) / scale) if scale > 0 else 0.0
    if resid > EXPANSION_RTOL:
        raise ExpansionError(f"vector is not in the sector {a} span (relative residual {resid:.2e})")
    return coef, resid


def expand_sectors(config: ChainConfig, vectors: dict[int, np.ndarray]) -> BetheElement:
    """Assemble a Bethe vector from its sector components in ``H``."""
    basis = enumerate_basis(config)
    coeffs = np.zeros(len(basis), dtype=complex)
    for a, vec in vectors.items():
        idx = basis.sector(a % config.r)
        coef, _ = expand_in_sector(config, a % config.r, vec)
        coeffs[idx] += coef
    return BetheElement(basis, coeffs)


def sector_components(element: BetheElement) -> dict[int, np.ndarray]:
    """Inverse of :func:`expand_sectors` (without the ``nu`` phases)."""
    cfg = element.basis.config
    out = {}
    for a in range(cfg.r):
        idx = element.basis.sector(a)
        if idx:
            out[a] = sector_matrix(cfg, a) @ element.coeffs[idx]
    return out


def boundary_z(config: ChainConfig) -> OperatorMatrix:
    """The boundary operator as a matrix between Bethe bases.

    A closed path ``(a_0, ..., a_N)`` goes to ``(a_{N-1}, a_0, ..., a_{N-1})``
    on the rotated chain with ``z_N -> z_N + kappa``, times
    ``exp(c (a_N - a_{N-1} - 2 l_N))``.  The ``nu`` phases of source and
    target basis elements are part of the basis vectors, so they do not
    appear in the matrix.
    """
    src = enumerate_basis(config)
    dst_cfg = config.rotated()
    dst = enumerate_basis(dst_cfg)
    mat = np.zeros((len(dst), len(src)), dtype=complex)
    two_l_n = config.twice_spins[-1]
    for k, path in enumerate(src.elements):
        a_n, a_prev = path[-1], path[-2]
        target = dst.canonical((a_prev,) + path[:-1])
        mat[dst.index(target), k] = np.exp(config.c * (a_n - a_prev - two_l_n))
    return OperatorMatrix(mat, config.label, dst_cfg.label)


def embed_two_site(op: np.ndarray, dims, p: int, q: int) -> np.ndarray:
    """Lift an operator on ``V_p (x) V_q`` (in that order) to the full chain space.

    ``p`` and ``q`` are 0-based and need not be adjacent or ordered.
    """
    total = int(np.prod(dims))
    basis = np.eye(total).reshape(*dims, total)
    t = np.asarray(op).reshape(dims[p], dims[q], dims[p], dims[q])
    out = np.tensordot(t, basis, axes=([2, 3], [p, q]))
    out = np.moveaxis(out, [0, 1], [p, q])
    return out.reshape(total, total)


def permutation_op(dims, perm) -> np.ndarray:
    """Operator sending tensor factor ``k`` of the source to position ``perm[k]``."""
    n = len(dims)
    total = int(np.prod(dims))
    basis = np.eye(total).reshape(*dims, total)
    return np.moveaxis(basis, list(range(n)), list(perm)).reshape(total, total)


def r_check(j: int, config: ChainConfig) -> OperatorMatrix:
    """``P_{j,j+1} R_{j,j+1}(z_j - z_{j+1})`` between Bethe spaces (1-based ``j``).

    The image of every basis path is computed in ``H`` and expanded in the
    swapped configuration's basis, sector by sector.
    """
    n = config.n_sites
    if not 1 <= j < n:
        raise ValueError(f"site index {j} out of range for {n} sites")
    src = enumerate_basis(config)
    dst_cfg = config.swapped(j)
    dst = enumerate_basis(dst_cfg)
    op = h_r_check(j, config)
    mat = np.zeros((len(dst), len(src)), dtype=complex)
    for a in range(config.r):
        s_idx = src.sector(a)
        if not s_idx:
            continue
        images = op @ sector_matrix(config, a)
        d_idx = dst.sector(a)
        A = sector_matrix(dst_cfg, a)
        coef, *_ = np.linalg.lstsq(A, images, rcond=None)
        resid = np.linalg.norm(A @ coef - images) / np.linalg.norm(images)
        if resid > EXPANSION_RTOL:
            raise ExpansionError(f"R-check image left the Bethe space (residual {resid:.2e})")
        mat[np.ix_(d_idx, s_idx)] = coef
    return OperatorMatrix(mat, config.label, dst_cfg.label)


def h_r_check(j: int, config: ChainConfig) -> np.ndarray:
    """``P_{j,j+1} R_{j,j+1}(z_j - z_{j+1})`` as an operator on ``H``."""
    ts, dims = config.twice_spins, config.dims
    u = config.z[j - 1] - config.z[j]
    R = r_matrix(ts[j - 1], ts[j], u, config.params, config.seed).matrix
    local = swap_matrix(dims[j - 1], dims[j]) @ R
    return _embed_adjacent(local, dims, j - 1)


def _embed_adjacent(local: np.ndarray, dims, k: int) -> np.ndarray:
    left = int(np.prod(dims[:k])) if k else 1
    right = int(np.prod(dims[k + 2 :])) if k + 2 < len(dims) else 1
    return np.kron(np.kron(np.eye(left), local), np.eye(right))


def zz_r_exchange(config: ChainConfig) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Both sides of ``R-check_12 Z Z = Z Z R-check_{N-1,N}``.

    Two boundary steps bring sites ``N-1, N`` to the front; exchanging them
    there agrees with exchanging them first.  Composition goes through the
    basis labels, so a mismatch in the intermediate spaces raises.
    """
    n = config.n_sites
    if n < 2:
        raise ValueError("the exchange needs at least two sites")
    zz = boundary_z(config.rotated()) @ boundary_z(config)
    lhs = r_check(1, config.rotated().rotated()) @ zz
    sw = config.swapped(n - 1)
    rhs = boundary_z(sw.rotated()) @ boundary_z(sw) @ r_check(n - 1, config)
    return lhs, rhs

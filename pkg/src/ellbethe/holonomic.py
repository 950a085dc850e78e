"""The operators ``A_j``, the difference system and its lattice-sum solution."""

from __future__ import annotations

import itertools
import math
import time
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .bethe import (
    BetheElement,
    ChainConfig,
    boundary_z,
    enumerate_basis,
    expand_in_sector,
    permutation_op,
    embed_two_site,
    path_vector_coords,
    r_check,
    sector_matrix,
)
from .errors import PoleError, WitnessError
from .intertwiner import alpha_l, delta_l
from .monodromy import bethe_psi
from .operators import OperatorMatrix
from .sklyanin import r_matrix
from .reports import ResidualReport, ResidualRow, rel_residual as _rel
from .weights import Germ, WeightFunctions, weight_functions

WITNESS_ATOL = 1e-12


# --- the operators A_j ------------------------------------------------------


def _chain(ops):
    out = ops[0]
    for op in ops[1:]:
        out = op @ out
    return out


def _move_to_end(j: int, config: ChainConfig):
    """``R-check_{N-1,N}(z_j - z_N) ... R-check_{j,j+1}(z_j - z_{j+1})`` and its target config."""
    ops, cfg = [], config
    for k in range(j, config.n_sites):
        ops.append(r_check(k, cfg))
        cfg = cfg.swapped(k)
    return ops, cfg


def _move_to_slot(j: int, config: ChainConfig):
    """Move the first site to position ``j`` by ``R-check_{12}`` first, ``R-check_{j-1,j}`` last."""
    ops, cfg = [], config
    for k in range(1, j):
        ops.append(r_check(k, cfg))
        cfg = cfg.swapped(k)
    return ops, cfg


def a_j(j: int, config: ChainConfig) -> OperatorMatrix:
    """``A_j(z)``: from the Bethe space at ``z`` to the one at ``z`` with ``z_j + kappa``.

    Built as the product of R-check factors around one boundary operator;
    the rightmost factors carry site ``j`` to the end of the chain, the
    boundary operator brings it to the front with ``z_j + kappa`` and the
    leftmost factors carry it back to position ``j``.
    """
    n = config.n_sites
    if not 1 <= j <= n:
        raise ValueError(f"site index {j} out of range for {n} sites")
    try:
        right, cfg = _move_to_end(j, config)
        z_op = boundary_z(cfg)
        left, _ = _move_to_slot(j, cfg.rotated())
    except PoleError as exc:
        raise PoleError(f"A_{j}: {exc}") from exc
    return _chain(right + [z_op] + left)


def a_j_alt(j: int, config: ChainConfig) -> OperatorMatrix:
    """``A_j`` from un-checked R matrices on non-adjacent factors and explicit permutations.

    Intermediate vectors live in the chain space ``H``; the boundary
    operator is the only step that goes through the path basis, and it is
    applied sector by sector since path vectors of different sectors need
    not be independent in ``H``.
    """
    n, dims = config.n_sites, config.dims
    ts, z, kappa = config.twice_spins, config.z, config.kappa
    params, seed = config.params, config.seed
    right = np.eye(int(np.prod(dims)), dtype=complex)
    for k in range(j + 1, n + 1):
        R = r_matrix(ts[j - 1], ts[k - 1], z[j - 1] - z[k - 1], params, seed).matrix
        right = embed_two_site(R, dims, j - 1, k - 1) @ right
    to_end = permutation_op(dims, [k if k < j - 1 else (n - 1 if k == j - 1 else k - 1) for k in range(n)])
    _, cfg_end = _move_to_end(j, config)
    rot = cfg_end.rotated()
    from_front = permutation_op(rot.dims, [j - 1 if k == 0 else (k - 1 if k < j else k) for k in range(n)])
    left = np.eye(int(np.prod(dims)), dtype=complex)
    for k in range(1, j):
        R = r_matrix(ts[j - 1], ts[k - 1], z[j - 1] + kappa - z[k - 1], params, seed).matrix
        left = embed_two_site(R, dims, j - 1, k - 1) @ left
    before, after = to_end @ right, left @ from_front
    z_mat = boundary_z(cfg_end).matrix

    src, mid, rot_basis = enumerate_basis(config), enumerate_basis(cfg_end), enumerate_basis(rot)
    target = config.shifted(j)
    dst = enumerate_basis(target)
    mat = np.zeros((len(dst), len(src)), dtype=complex)
    for k, path in enumerate(src.elements):
        a = path[0]
        coef, _ = expand_in_sector(cfg_end, a, before @ path_vector_coords(path, config))
        e = np.zeros(len(mid), dtype=complex)
        e[mid.sector(a)] = coef
        image = z_mat @ e
        for b in range(config.r):
            idx = rot_basis.sector(b)
            if not idx or not np.any(image[idx]):
                continue
            h = after @ (sector_matrix(rot, b) @ image[idx])
            coef_b, _ = expand_in_sector(target, b, h)
            mat[dst.sector(b), k] += coef_b
    return OperatorMatrix(mat, config.label, target.label)


def holonomy_check(j: int, k: int, config: ChainConfig) -> ResidualReport:
    """``A_j(z_k) A_k(z) = A_k(z_j) A_j(z)``."""
    if j == k:
        raise ValueError("compatibility needs two different sites")
    t0 = time.perf_counter()
    lhs = a_j(j, config.shifted(k)) @ a_j(k, config)
    rhs = a_j(k, config.shifted(j)) @ a_j(j, config)
    report = ResidualReport()
    report.add(f"holonomy A_{j}A_{k}", "compatibility of A_j", _rel(lhs.matrix - rhs.matrix, lhs.matrix), 1e-8)
    report.seconds[f"holonomy_{j}_{k}"] = time.perf_counter() - t0
    return report


# --- weight functions -------------------------------------------------------


def _weights(config: ChainConfig) -> WeightFunctions:
    return weight_functions(config.params, config.kappa)


def f_l(spin, t, config: ChainConfig) -> complex:
    return _weights(config).f_l(spin, t)


def phi_pair(t, config: ChainConfig) -> complex:
    return _weights(config).phi_pair(t)


def varphi_germ(t, config: ChainConfig) -> Germ:
    wf = _weights(config)
    t = [complex(x) for x in t]
    # the boundary operator carries e^{c(...)} per site crossed, which the
    # lattice sum only reproduces with this normalization of the c-factor
    out = Germ(-2 * config.c * sum(t) / config.kappa)
    for a, b in itertools.combinations(range(len(t)), 2):
        out = out * wf.phi_germ(t[a] - t[b])
    for x in t:
        for spin, zn in zip(config.spins, config.z):
            out = out * wf.f_l_germ(spin, x - zn)
    return out


def varphi_weight(t, config: ChainConfig) -> complex:
    """``e^{-2 c sum t / kappa} prod Phi(t_i - t_j) prod F^{l_n}(t_j - z_n)``."""
    return varphi_germ(t, config).value(f"varphi at t = {tuple(complex(x) for x in t)}")


def varphi_relation(config: ChainConfig, j: int, t, part_ii) -> tuple[complex, complex]:
    """Both sides of the two-sided functional relation for ``varphi``.

    ``part_ii`` is the set of (0-based) indices shifted by ``kappa``.
    Returns ``(lhs, rhs)``.
    """
    wf = _weights(config)
    p, kappa, c = config.params, config.kappa, config.c
    t = [complex(x) for x in t]
    part_i = [i for i in range(len(t)) if i not in part_ii]
    shifted = config.shifted(j)
    t_shift = [x + kappa if i in part_ii else x for i, x in enumerate(t)]
    lhs = varphi_weight(t_shift, shifted)
    rhs = varphi_weight(t, config) * np.exp(-2 * c * len(part_ii))
    for i in part_i:
        for ip in part_ii:
            lhs *= wf.alpha_ex(t[ip] + kappa - t[i])
            rhs *= wf.alpha_ex(t[i] - t[ip])
    others = [k for k in range(config.n_sites) if k != j - 1]
    for ip in part_ii:
        for k in others:
            lhs *= alpha_l(config.spins[k], t[ip] + kappa - config.z[k], p)
            rhs *= delta_l(config.spins[k], t[ip] - config.z[k], p)
    for i in part_i:
        lhs *= delta_l(config.spins[j - 1], t[i] - config.z[j - 1] - kappa, p)
        rhs *= alpha_l(config.spins[j - 1], t[i] - config.z[j - 1], p)
    return complex(lhs), complex(rhs)


# --- cycles and the lattice sum -----------------------------------------------


def kappa_from_witness(config: ChainConfig, j: int, witness) -> complex:
    """``kappa = (m_0 + m_1 tau + 4 l_j eta) / n``."""
    n, m0, m1 = (int(v) for v in witness)
    if n <= 0 or m1 <= 0:
        raise WitnessError(f"witness needs n > 0 and m_1 > 0, got {witness}")
    four_l_eta = 2 * config.twice_spins[j - 1] * Fraction(config.params.eta_num, config.params.eta_den)
    return (m0 + m1 * config.params.tau + float(four_l_eta)) / n


@dataclass(frozen=True)
class CyclePoint:
    """One point of the window.

    ``on_zero_lattice`` is decided in integers from the witness.  When the
    nomes are dependent (``q = -p`` for ``kappa = tau + 1/2``) a pole of
    ``F`` can sit on the same point; ``cancelled`` records that case.  Such
    points still count as zeros: the witness relation holds for a whole
    family of ``eta``, the zero is genuine for every nearby member, and the
    lattice sum is continuous along the family.
    """

    m: int
    t: complex
    on_zero_lattice: bool
    cancelled: bool

    @property
    def vanishes(self) -> bool:
        return self.on_zero_lattice


@dataclass(frozen=True)
class Cycle:
    """The finite window ``t = x + m0 + m1 tau + m kappa + 2 l_j eta`` of a cycle.

    ``x`` is ``z_j`` of the configuration the cycle was built for; the points
    are stored as absolute values so the same cycle serves every
    configuration reached by ``kappa`` shifts.
    """

    site: int
    witness: tuple[int, int, int]
    base: tuple[int, int]
    kappa: complex
    window: tuple[int, int]
    anchor: complex
    points: tuple[CyclePoint, ...]

    @property
    def active(self) -> tuple[CyclePoint, ...]:
        return tuple(p for p in self.points if not p.vanishes)

    def steps_from_anchor(self, config: ChainConfig) -> int:
        """How many ``kappa`` steps ``z_j`` of ``config`` sits above the anchor."""
        ratio = (config.z[self.site - 1] - self.anchor) / self.kappa
        k = int(round(ratio.real))
        if abs(ratio - k) > 1e-9:
            raise WitnessError(f"z_{self.site} = {config.z[self.site - 1]} is not on the cycle's kappa lattice")
        return k

    def active_for(self, config: ChainConfig) -> tuple[CyclePoint, ...]:
        """Points that are not zeros of ``F^{l_j}(t - z_j)`` for this configuration."""
        k = self.steps_from_anchor(config)
        return tuple(p for p in self.points if not _on_zero_lattice(p.m - k, self.base, self.witness))


def _on_zero_lattice(m: int, base, witness) -> bool:
    m00, m10 = base
    n, _, m1 = witness
    return m10 >= 0 and (m >= 1 or (m <= -n - 1 and m1 > m10))


def build_cycle(config: ChainConfig, j: int, witness, window=(-6, 6), base=(0, 0)) -> Cycle:
    """Cycle anchored at ``z_j`` for an integrality witness ``(n, m_0, m_1)``.

    ``config.kappa`` must equal the witness value; use
    :func:`with_witness_kappa` to build such a config.
    """
    witness = tuple(int(v) for v in witness)
    kappa = kappa_from_witness(config, j, witness)
    if abs(config.kappa - kappa) > WITNESS_ATOL:
        raise WitnessError(f"config kappa {config.kappa} differs from the witness value {kappa}")
    lo, hi = (int(v) for v in window)
    if lo > hi:
        raise ValueError(f"empty window {window}")
    spin = config.spins[j - 1]
    wf = _weights(config)
    two_l_eta = spin.twice_l * config.params.eta
    m00, m10 = base
    pts = []
    for m in range(lo, hi + 1):
        off = m00 + m10 * config.params.tau + m * kappa + two_l_eta
        on_lattice = _on_zero_lattice(m, base, witness)
        try:
            cancelled = on_lattice and wf.f_l_germ(spin, off).order <= 0
        except OverflowError:
            cancelled = False
        pts.append(CyclePoint(m, config.z[j - 1] + off, on_lattice, cancelled))
    return Cycle(j, witness, (m00, m10), kappa, (lo, hi), config.z[j - 1], tuple(pts))


def with_witness_kappa(config: ChainConfig, j: int, witness) -> ChainConfig:
    return replace(config, kappa=kappa_from_witness(config, j, witness))


def _fsum_complex(vectors: list[np.ndarray]) -> np.ndarray:
    if not vectors:
        return None
    stack = np.array(vectors)
    re = [math.fsum(col) for col in stack.real.T]
    im = [math.fsum(col) for col in stack.imag.T]
    return np.array(re) + 1j * np.array(im)


def solve(config: ChainConfig, cycle: Cycle) -> BetheElement:
    """``f(z) = sum_t varphi(z|t) Psi(t)`` over the ``M``-fold product of cycle points.

    Terms are visited in lexicographic order of the window offsets and
    summed with ``math.fsum`` per coordinate.  Terms whose weight vanishes
    identically or underflows are skipped before ``Psi`` is evaluated.
    """
    big_m = config.big_m
    basis = enumerate_basis(config)
    terms = []
    for combo in itertools.product(cycle.active_for(config), repeat=big_m):
        t = tuple(pt.t for pt in combo)
        try:
            weight = varphi_weight(t, config)
        except PoleError as exc:
            raise PoleError(f"term m = {tuple(pt.m for pt in combo)}: {exc}") from exc
        if weight == 0:
            continue
        try:
            psi = bethe_psi(t, config)
        except PoleError as exc:
            raise PoleError(f"term m = {tuple(pt.m for pt in combo)}: {exc}") from exc
        terms.append(weight * psi.coeffs)
    if not terms:
        warnings.warn("every term of the lattice sum vanishes", RuntimeWarning, stacklevel=2)
        return BetheElement(basis, np.zeros(len(basis), dtype=complex))
    return BetheElement(basis, _fsum_complex(terms))


def verify_system(config: ChainConfig, cycle: Cycle, tolerance: float = 1e-6) -> ResidualReport:
    """Residuals of ``f(z_j) = A_j(z) f(z)`` and of the reduced form, for every ``j``."""
    report = ResidualReport()
    report.parameters.update({"kappa": config.kappa, "c": config.c, "nu": config.nu})
    report.windows["cycle"] = cycle.window
    t0 = time.perf_counter()
    f = solve(config, cycle)
    for j in range(1, config.n_sites + 1):
        shifted = config.shifted(j)
        f_shift = solve(shifted, cycle)
        image = a_j(j, config).apply(f.coeffs, f.label)
        report.add(f"difference equation j={j}", "f(z_j) = A_j f(z)", _rel(f_shift.coeffs - image, f_shift.coeffs), tolerance)
        lhs, rhs, _ = reduced_sides(j, config, f, f_shift)
        report.add(f"reduced equation j={j}", "unitarity-reduced difference equation", _rel(lhs - rhs, lhs), tolerance)
    report.seconds["verify_system"] = time.perf_counter() - t0
    return report


def _move_to_front(j: int, config: ChainConfig):
    """``R-check_{12}(...) ... R-check_{j-1,j}(...)``: site ``j`` to the front, rightmost first."""
    ops, cfg = [], config
    for k in range(j - 1, 0, -1):
        ops.append(r_check(k, cfg))
        cfg = cfg.swapped(k)
    return ops, cfg


def reduced_sides(j: int, config: ChainConfig, f: BetheElement, f_shift: BetheElement):
    """Both sides of the unitarity-reduced equation as coefficient vectors."""
    shifted = config.shifted(j)
    lhs_ops, _ = _move_to_front(j, shifted)
    right, cfg_end = _move_to_end(j, config)
    rhs = _chain(right + [boundary_z(cfg_end)]).apply(f.coeffs, f.label)
    lhs = _chain(lhs_ops).apply(f_shift.coeffs, f_shift.label) if lhs_ops else f_shift.coeffs
    return lhs, rhs, (_chain(lhs_ops) if lhs_ops else None)

"""Verification suites: every identity the package relies on, as report rows.

Each suite takes a :class:`RunConfig` and returns a
:class:`~ellbethe.reports.ResidualReport`.  Random draws come from
``numpy.random.default_rng(seed)`` with one generator per suite, so a suite's
rows do not depend on which other suites ran before it.

A check that raises is recorded as a failed row with an infinite residual
and the exception text in the ``check`` column.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import holonomic as ho
from .bethe import (
    ChainConfig,
    boundary_z,
    enumerate_basis,
    path_vector_coords,
    r_check,
    weight_zero_count,
    zz_r_exchange,
)
from .intertwiner import (
    action_residuals,
    alpha_l,
    delta_l,
    gauge_matrix,
    identification_residual,
    vacuum_action_residuals,
    vacuum_irf_weight,
)
from .monodromy import (
    bethe_psi,
    exchange_residuals,
    split_b,
    twisted_monodromy,
    two_side_lhs,
    two_side_rhs,
    vacuum_path,
    vacuum_residuals,
)
from .reports import ResidualReport, rel_residual
from .sklyanin import (
    DEFAULT_SEED,
    Spin,
    baxter_r,
    comm_rel_residuals,
    pauli_residual,
    rll_residual,
    spin_rep,
    swap_matrix,
    unitarity_residual,
    weights_l,
    weights_r,
    yang_baxter_residual,
)
from .theta import ModularParams, pochhammer, pochhammer_double, precision, theta
from .weights import weight_functions

SUITES = ("theta", "sklyanin", "intertwiner", "bethe", "monodromy", "holonomic")

DEFAULT_TOLERANCES = {
    "theta": 1e-12,
    "comm_rel": 1e-9,
    "pauli": 1e-10,
    "rll": 1e-9,
    "yang_baxter": 1e-10,
    "unitarity": 1e-9,
    "weights": 1e-12,
    "intertwiner": 1e-9,
    "gauge": 1e-11,
    "irf": 1e-9,
    "count": 0.5,
    "lemma": 1e-9,
    "r_check": 1e-9,
    "periodicity": 1e-12,
    "vacuum": 1e-9,
    "vacuum_c": 1e-10,
    "exchange": 1e-9,
    "two_side": 1e-9,
    "split": 1e-10,
    "psi": 1e-9,
    "holonomy": 1e-8,
    "dual_route": 1e-9,
    "weight_functions": 1e-10,
    "theorem": 1e-6,
    "stability": 1e-9,
    "varphi": 1e-8,
}

# generic parameters shared by the fixed (non-drawn) checks
GENERIC_TAU = 0.3 + 1.1j
GENERIC_LAMBDA = 0.213 + 0.041j
GENERIC_KAPPA = 0.19 + 0.83j
GENERIC_C = 0.3 - 0.2j
GENERIC_Z = (0.11 + 0.03j, -0.17 + 0.05j, 0.23 - 0.02j, -0.05 + 0.08j)
# rational eta values for random draws; small denominators keep r small
ETA_CHOICES = ((1, 4), (2, 7), (1, 5), (3, 8), (2, 9), (3, 10))


@dataclass(frozen=True)
class RunConfig:
    """A chain plus everything a verification run needs besides the chain."""

    chain: ChainConfig
    witness: tuple[int, int, int] | None = (1, 0, 1)
    site: int = 1
    window: tuple[int, int] = (-6, 6)
    seed: int = DEFAULT_SEED
    precision: str = "double"
    tolerances: dict = field(default_factory=dict)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def describe(self) -> dict:
        ch = self.chain
        return {
            "tau": ch.params.tau,
            "eta": f"{ch.params.eta_num}/{ch.params.eta_den}",
            "spins": [str(s) for s in ch.spins],
            "z": list(ch.z),
            "lambda_ring": ch.lambda_ring,
            "kappa": ch.kappa,
            "c": ch.c,
            "nu": ch.nu,
            "witness": list(self.witness) if self.witness else None,
            "site": self.site,
            "window": list(self.window),
            "seed": self.seed,
            "precision": self.precision,
        }


def desk_config(seed: int = DEFAULT_SEED) -> RunConfig:
    """Two spin-1/2 sites, ``eta = 1/4`` and ``kappa`` from the witness ``(1, 0, 1)``."""
    params = ModularParams(GENERIC_TAU, 1, 4)
    chain = ChainConfig((1, 1), GENERIC_Z[:2], params, lambda_ring=GENERIC_LAMBDA, c=GENERIC_C, nu=1, seed=seed)
    chain = ho.with_witness_kappa(chain, 1, (1, 0, 1))
    return RunConfig(chain, (1, 0, 1), 1, (-6, 6), seed)


# --- helpers ----------------------------------------------------------------


class _Recorder:
    def __init__(self, run: RunConfig, report: ResidualReport):
        self.run = run
        self.report = report

    def check(self, name: str, equation: str, tol_key: str, fn):
        tol = self.run.tol(tol_key)
        try:
            value = float(fn())
        except Exception as exc:  # a crashing check is a failing check
            self.report.add(f"{name} [{type(exc).__name__}: {exc}]", equation, float("inf"), tol)
            return
        self.report.add(name, equation, value, tol)


def _rng(run: RunConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([run.seed, salt])


def _cpoint(rng, re=(-0.5, 0.5), im=(-0.3, 0.3)) -> complex:
    return complex(rng.uniform(*re), rng.uniform(*im))


def _draw_params(rng) -> ModularParams:
    num, den = ETA_CHOICES[rng.integers(len(ETA_CHOICES))]
    tau = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.8, 1.4))
    return ModularParams(tau, num, den)


def _draw_chain(rng, twice_spins, eta=None, open_chain=False) -> ChainConfig:
    tau = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.8, 1.4))
    num, den = eta if eta else ETA_CHOICES[rng.integers(len(ETA_CHOICES))]
    params = ModularParams(tau, num, den)
    z = tuple(_cpoint(rng, (-0.3, 0.3), (-0.1, 0.1)) for _ in twice_spins)
    return ChainConfig(
        tuple(twice_spins),
        z,
        params,
        lambda_ring=_cpoint(rng, (0.1, 0.4), (-0.1, 0.1)),
        kappa=complex(rng.uniform(-0.3, 0.3), rng.uniform(0.6, 1.0)),
        c=_cpoint(rng, (-0.4, 0.4), (-0.4, 0.4)),
        open_chain=open_chain,
    )


def _generic_chain(twice_spins, eta=(2, 7), open_chain=False) -> ChainConfig:
    return ChainConfig(
        tuple(twice_spins),
        GENERIC_Z[: len(twice_spins)],
        ModularParams(GENERIC_TAU, *eta),
        lambda_ring=GENERIC_LAMBDA,
        kappa=GENERIC_KAPPA,
        c=GENERIC_C,
        open_chain=open_chain,
    )


# --- theta ------------------------------------------------------------------


def theta_suite(run: RunConfig) -> ResidualReport:
    report = ResidualReport()
    rec = _Recorder(run, report)
    rng = _rng(run, 1)
    pts = []
    for _ in range(100):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5))
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1) * tau.imag)
        pts.append((z, tau))

    def oddness():
        return max(abs(theta("11", -z, t) + theta("11", z, t)) / max(1.0, abs(theta("11", z, t))) for z, t in pts)

    def period_one():
        worst = 0.0
        for ch in ("00", "01", "10", "11"):
            sign = -1 if ch[0] == "1" else 1
            for z, t in pts:
                v = theta(ch, z, t)
                worst = max(worst, abs(theta(ch, z + 1, t) - sign * v) / max(1.0, abs(v)))
        return worst

    def quasi():
        worst = 0.0
        for z, t in pts:
            v = theta("11", z, t)
            w = theta("11", z + t, t)
            pred = -cmath.exp(-1j * cmath.pi * t - 2j * cmath.pi * z) * v
            worst = max(worst, abs(w - pred) / max(abs(w), abs(pred), 1e-300))
        return worst

    def triple_product():
        worst = 0.0
        for z, t in pts[:20]:
            p = cmath.exp(2j * cmath.pi * t)
            half = cmath.exp(1j * cmath.pi * t)
            w = cmath.exp(2j * cmath.pi * z)
            prod = pochhammer(p, p) * pochhammer(-half * w, p) * pochhammer(-half / w, p)
            series = theta("00", z, t)
            worst = max(worst, abs(series - prod) / max(1.0, abs(series)))
        return worst

    def double_product():
        worst = 0.0
        for _ in range(5):
            x, p, q = (_cpoint(rng, (-0.4, 0.4), (-0.4, 0.4)) for _ in range(3))
            cols, n = 1 + 0j, 0
            while abs(q**n * x) >= 1e-17:
                cols *= pochhammer(q**n * x, p)
                n += 1
            # loop order swapped: rows in p, columns in q
            rows, m = 1 + 0j, 0
            while abs(p**m * x) >= 1e-17:
                rows *= pochhammer(p**m * x, q)
                m += 1
            d = pochhammer_double(x, p, q)
            worst = max(worst, abs(d - cols) / abs(cols), abs(d - rows) / abs(rows))
        return worst

    rec.check("theta11 oddness, 100 points", "theta11(-z) = -theta11(z)", "theta", oddness)
    rec.check("integer period, 4 characteristics x 100 points", "theta_ab(z+1) = (-1)^a theta_ab(z)", "theta", period_one)
    rec.check("theta11 quasi-periodicity, 100 points", "theta11(z+tau) = -exp(-pi i tau - 2 pi i z) theta11(z)", "theta", quasi)
    rec.check("triple product vs series", "Jacobi triple product for theta00", "theta", triple_product)
    rec.check("double Pochhammer vs column and row products", "(x;p,q) = prod_n (q^n x;p)", "theta", double_product)
    rec.check(
        "theta00(0; i)",
        "series value 1.0864348112133080",
        "theta",
        lambda: abs(theta("00", 0, 1j) - 1.0864348112133080),
    )
    return report


# --- sklyanin ---------------------------------------------------------------


def sklyanin_suite(run: RunConfig) -> ResidualReport:
    report = ResidualReport()
    rec = _Recorder(run, report)
    rng = _rng(run, 2)
    draws = [_draw_params(rng) for _ in range(5)]
    for k, params in enumerate(draws):
        for twice_l in (1, 2, 3):
            rec.check(
                f"quadratic relations l={Spin(twice_l)} draw {k}",
                "Sklyanin quadratic relations",
                "comm_rel",
                lambda: max(comm_rel_residuals(spin_rep(Spin(twice_l), params, run.seed)).values()),
            )
        rec.check(f"spin-1/2 generators draw {k}", "S^a = theta11(2 eta) sigma^a", "pauli", lambda: pauli_residual(params, run.seed))

    params = ModularParams(GENERIC_TAU, 2, 7)
    uv = [(_cpoint(rng), _cpoint(rng)) for _ in range(10)]
    for twice_l in (1, 2):
        rep = spin_rep(Spin(twice_l), params, run.seed)
        rec.check(
            f"RLL l={Spin(twice_l)}, 10 points",
            "R12(u-v) L13(u) L23(v) = L23(v) L13(u) R12(u-v)",
            "rll",
            lambda: max(rll_residual(rep, u, v) for u, v in uv),
        )
        rec.check(
            f"unitarity R^(1/2,{Spin(twice_l)}), 10 points",
            "R12(u) R21(-u) = 1",
            "unitarity",
            lambda: max(unitarity_residual(rep, u) for u, _ in uv),
        )
    rec.check("Yang-Baxter, 10 points", "R12 R13 R23 = R23 R13 R12", "yang_baxter", lambda: max(yang_baxter_residual(params, u, v) for u, v in uv))
    rec.check("R(0) is the permutation", "R(0) = P", "yang_baxter", lambda: np.linalg.norm(baxter_r(0, params).matrix - swap_matrix(2, 2)))

    def weight_consistency():
        t2 = theta("11", 2 * params.eta, params.tau)
        return max(abs(a - t2 * b) / abs(a) for u, _ in uv for a, b in zip(weights_r(u, params), weights_l(u + params.eta, params)))

    rec.check("R weights from L weights", "W^R_a(u) = theta11(2 eta) W^L_a(u + eta)", "weights", weight_consistency)
    return report


# --- intertwiner ------------------------------------------------------------


def intertwiner_suite(run: RunConfig) -> ResidualReport:
    report = ResidualReport()
    rec = _Recorder(run, report)
    rng = _rng(run, 3)
    for k in range(5):
        params = _draw_params(rng)
        lam = _cpoint(rng, (0.1, 0.4), (-0.1, 0.1))
        u, v = _cpoint(rng), _cpoint(rng)
        for twice_l in (1, 2):
            spin = Spin(twice_l)
            rec.check(
                f"twisted L on intertwiners l={spin} draw {k}",
                "alpha/beta/gamma/delta on intertwining vectors",
                "intertwiner",
                lambda: max(action_residuals(spin, params, lam, u, v, run.seed).values()),
            )
            rec.check(
                f"twisted L on local pseudo-vacuum l={spin} draw {k}",
                "alpha/gamma/delta on local pseudo-vacuum",
                "intertwiner",
                lambda: max(vacuum_action_residuals(spin, params, lam, u, v).values()),
            )
        rec.check(
            f"spin-1/2 intertwiners as gauge columns draw {k}",
            "phi(u - eta) = C (-theta01, theta00)((lam +- u)/2; tau/2)",
            "intertwiner",
            lambda: identification_residual(params, lam, u),
        )

        def gauge_inverse():
            g = gauge_matrix(lam, u, params)
            return np.linalg.norm(g.m @ g.m_inv - np.eye(2))

        rec.check(f"gauge matrix inverse draw {k}", "M M^-1 = 1", "gauge", gauge_inverse)
    params = ModularParams(GENERIC_TAU, 2, 7)
    for twice_l in (1, 2):
        rec.check(
            f"vacuum IRF weight (1/2,{Spin(twice_l)})",
            "R on vacuum intertwiners: W = 1",
            "irf",
            lambda: abs(vacuum_irf_weight(Spin(1), Spin(twice_l), params, GENERIC_LAMBDA, 0.27 + 0.03j).value - 1),
        )
    return report


# --- bethe ------------------------------------------------------------------


def enumerate_closed_paths(twice_spins, r: int) -> int:
    """Count closed admissible paths by brute force over all step sequences.

    Used as an oracle independent of :func:`enumerate_basis`.
    """
    count = 0
    for a in range(r):
        for steps in itertools.product(*[range(-t, t + 1, 2) for t in twice_spins]):
            if sum(steps) == 0:
                count += 1
    return count


def weight_zero_oracle(twice_spins) -> int:
    """Weight-zero dimension from sl2 characters (multiplicity of ``m = 0`` in the product)."""
    total = 0
    for ms in itertools.product(*[range(-t, t + 1, 2) for t in twice_spins]):
        total += sum(ms) == 0
    return total


BETHE_DIMENSION_CASES = (((1, 1), (1, 4)), ((1, 1, 2), (2, 7)), ((1, 1, 1, 1), (1, 5)))


def bethe_suite(run: RunConfig) -> ResidualReport:
    report = ResidualReport()
    rec = _Recorder(run, report)
    for spins, eta in BETHE_DIMENSION_CASES:
        cfg = _generic_chain(spins, eta)
        rec.check(
            f"basis size spins={list(spins)} eta={eta[0]}/{eta[1]}",
            "dim = r x dim(weight-zero space)",
            "count",
            lambda: abs(len(enumerate_basis(cfg)) - cfg.r * weight_zero_oracle(spins)),
        )
        rec.check(
            f"closed-path count spins={list(spins)}",
            "closed admissible paths",
            "count",
            lambda: abs(enumerate_closed_paths(spins, cfg.r) - cfg.r * weight_zero_count(spins)),
        )
    for spins in ((1, 1), (2, 1, 1)):
        cfg = _generic_chain(spins, (2, 7))

        def lemma():
            lhs, rhs = zz_r_exchange(cfg)
            return rel_residual(lhs.matrix - rhs.matrix, lhs.matrix)

        rec.check(f"R-check Z Z exchange spins={list(spins)}", "R12 Z Z = Z Z R(N-1,N)", "lemma", lemma)

        def unitarity():
            prod = r_check(1, cfg.swapped(1)) @ r_check(1, cfg)
            return np.linalg.norm(prod.matrix - np.eye(prod.shape[0])) / np.sqrt(prod.shape[0])

        rec.check(f"R-check unitarity spins={list(spins)}", "R-check(swapped) R-check = 1", "r_check", unitarity)

        def z_shape():
            mat = boundary_z(cfg).matrix
            return float(np.sum(np.count_nonzero(mat, axis=0) != 1))

        rec.check(f"boundary operator columns spins={list(spins)}", "Z is permutation x diagonal", "count", z_shape)

        def periodicity():
            path = vacuum_path(0, cfg)
            a = path_vector_coords(path, cfg)
            b = path_vector_coords(tuple(x + cfg.r for x in path), cfg)
            return rel_residual(a - b, a)

        rec.check(f"path shifted by r spins={list(spins)}", "periodicity of path vectors", "periodicity", periodicity)
    return report


# --- monodromy --------------------------------------------------------------

TWO_SIDE_CASES = ((2, 1, 1), (3, 1, 1), (3, 1, 2))


def monodromy_suite(run: RunConfig) -> ResidualReport:
    report = ResidualReport()
    rec = _Recorder(run, report)
    rng = _rng(run, 5)
    cfg = _generic_chain((1, 1), (2, 7))
    for k in range(5):
        u, v = _cpoint(rng), _cpoint(rng)
        a, a_prime = (int(x) for x in rng.integers(-3, 4, size=2))
        res = exchange_residuals(cfg, u, v, a, a_prime)
        for name, label in (("B-B", "B(u)B(v) = B(v)B(u)"), ("A-B", "A(u)B(v) exchange"), ("D-B", "D(u)B(v) exchange")):
            rec.check(f"{name} exchange draw {k}", label, "exchange", lambda: res[name])
        vac = vacuum_residuals(cfg, u, a)
        rec.check(f"A on global vacuum draw {k}", "A Omega_a = prod alpha Omega_(a-1)", "vacuum", lambda: vac["A"])
        rec.check(f"C on global vacuum draw {k}", "C Omega_a = 0", "vacuum_c", lambda: vac["C"])
        rec.check(f"D on global vacuum draw {k}", "D Omega_a = prod delta Omega_(a+1)", "vacuum", lambda: vac["D"])

    for n_sites, m, n in TWO_SIDE_CASES:
        chain = _generic_chain((1,) * n_sites, (2, 7), open_chain=True)
        t = tuple(_cpoint(rng) for _ in range(m))

        def two_side():
            lhs = two_side_lhs(t, 0, chain)
            return rel_residual(lhs - two_side_rhs(t, 0, chain, n), lhs)

        rec.check(f"two-side formula N={n_sites} m={m} n={n}", "splitting of B...B Omega over two sub-chains", "two_side", two_side)

    def split():
        u = _cpoint(rng)
        b = int(rng.integers(-2, 3))
        full = twisted_monodromy(1, -1, u, cfg).B
        return rel_residual(full - split_b(u, 1, -1, b, cfg, 1), full)

    rec.check("B of the full chain from sub-chain blocks", "B = A^R B^L + B^R D^L", "split", split)

    cfg2 = _generic_chain((2, 1, 1), (2, 7))

    def psi_symmetry():
        t1, t2 = _cpoint(rng), _cpoint(rng)
        x = bethe_psi((t1, t2), cfg2).coeffs
        return rel_residual(x - bethe_psi((t2, t1), cfg2).coeffs, x)

    def psi_origin():
        t = (_cpoint(rng), _cpoint(rng))
        x = bethe_psi(t, cfg2).coeffs
        return rel_residual(x - bethe_psi(t, cfg2, origin=cfg2.r).coeffs, x)

    rec.check("Psi symmetric in t, M=2", "Psi(t1,t2) = Psi(t2,t1)", "psi", psi_symmetry)
    rec.check("Psi origin of the a-sum", "periodicity in a", "psi", psi_origin)
    return report


# --- holonomic --------------------------------------------------------------

HOLONOMY_SPINS = ((1, 1), (2, 1, 1))


def _weight_checks(rec: _Recorder, rng) -> None:
    params = ModularParams(GENERIC_TAU, 2, 7)
    wf = weight_functions(params, GENERIC_KAPPA)
    kappa = GENERIC_KAPPA
    pts = [_cpoint(rng) for _ in range(20)]
    for twice_l in (1, 2, 3):
        spin = Spin(twice_l)

        def f_eq():
            worst = 0.0
            for t in pts:
                lhs = wf.f_l(spin, t + kappa) * alpha_l(spin, t + kappa, params)
                rhs = delta_l(spin, t, params) * wf.f_l(spin, t)
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
            return worst

        def product_identity():
            return max(abs(wf.ratio_theta(spin, t) - wf.ratio_product(spin, t)) / abs(wf.ratio_theta(spin, t)) for t in pts)

        rec.check(f"F difference equation l={spin}, 20 points", "F(t+kappa) = delta(t)/alpha(t+kappa) F(t)", "weight_functions", f_eq)
        rec.check(f"product form of delta/alpha l={spin}, 20 points", "delta(t)/alpha(t+kappa) as Pochhammer ratio", "weight_functions", product_identity)

    def phi_eq():
        worst = 0.0
        for t in pts:
            lhs = wf.phi_pair(t + kappa) * wf.alpha_ex(t + kappa)
            rhs = wf.alpha_ex(-t) * wf.phi_pair(t)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return worst

    rec.check("Phi difference equation, 20 points", "Phi(t+kappa) = alpha(-t)/alpha(t+kappa) Phi(t)", "weight_functions", phi_eq)

    def divisor():
        bad = 0
        tau, eta = params.tau, params.eta
        for twice_l in (1, 2):
            spin = Spin(twice_l)
            le = twice_l * eta
            for n, m1, m2 in ((0, 0, 1), (1, 0, 2), (-1, 1, 1), (0, 2, 3)):
                bad += wf.f_l_germ(spin, n + m1 * tau + m2 * kappa + le).order <= 0
                bad += wf.f_l_germ(spin, n + m1 * tau + (m2 - 1) * kappa - le).order >= 0
            for n, m1, m2 in ((0, 1, 1), (2, 2, 1), (-1, 1, 2)):
                bad += wf.f_l_germ(spin, n - m1 * tau - m2 * kappa - le).order <= 0
                bad += wf.f_l_germ(spin, n - m1 * tau - (m2 - 1) * kappa + le).order >= 0
        bad += wf.phi_germ(0).order <= 0
        return float(bad)

    rec.check("F zero and pole lattices, spot checks", "zeros and poles of F", "count", divisor)


def holonomic_suite(run: RunConfig) -> ResidualReport:
    report = ResidualReport()
    report.parameters.update(run.describe())
    rec = _Recorder(run, report)
    rng = _rng(run, 6)
    for spins in HOLONOMY_SPINS:
        for k in range(3):
            cfg = _draw_chain(rng, spins, (1, 4) if k == 0 else (2, 7))
            for j, kk in itertools.combinations(range(1, len(spins) + 1), 2):
                rec.check(
                    f"compatibility A_{j},A_{kk} spins={list(spins)} draw {k}",
                    "A_j(z_k) A_k(z) = A_k(z_j) A_j(z)",
                    "holonomy",
                    lambda: ho.holonomy_check(j, kk, cfg).rows[0].residual,
                )
    for spins in HOLONOMY_SPINS:
        cfg = _generic_chain(spins, (2, 7))
        for j in range(1, len(spins) + 1):

            def dual():
                a = ho.a_j(j, cfg).matrix
                return rel_residual(a - ho.a_j_alt(j, cfg).matrix, a)

            rec.check(f"A_{j} two constructions spins={list(spins)}", "A_j via R-check vs via R and permutations", "dual_route", dual)

    _weight_checks(rec, rng)

    for spins in ((1, 1), (2, 1, 1), (1, 1, 1, 1)):
        cfg = _generic_chain(spins, (2, 7))
        m = cfg.big_m
        t = [_cpoint(rng) for _ in range(m)]

        def relation():
            worst = 0.0
            for j in range(1, cfg.n_sites + 1):
                for r in range(m + 1):
                    for part in itertools.combinations(range(m), r):
                        lhs, rhs = ho.varphi_relation(cfg, j, t, set(part))
                        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
            return worst

        rec.check(f"varphi relation all partitions M={m} spins={list(spins)}", "two-sided relation for varphi", "varphi", relation)

    if run.witness is not None:
        _theorem_checks(run, report, rec)
    return report


def _theorem_checks(run: RunConfig, report: ResidualReport, rec: _Recorder) -> None:
    chain = run.chain
    try:
        cycle = ho.build_cycle(chain, run.site, run.witness, run.window)
    except Exception as exc:
        report.add(f"cycle construction [{type(exc).__name__}: {exc}]", "cycle from the integrality witness", float("inf"), run.tol("theorem"))
        return
    report.windows["cycle"] = list(run.window)
    report.parameters["active_points"] = [p.m for p in cycle.active]
    try:
        system = ho.verify_system(chain, cycle, run.tol("theorem"))
    except Exception as exc:
        report.add(f"difference system [{type(exc).__name__}: {exc}]", "f(z_j) = A_j f(z)", float("inf"), run.tol("theorem"))
        return
    report.rows.extend(system.rows)

    lo, hi = run.window
    wide = (2 * lo, 2 * hi)
    report.windows["stability"] = list(wide)

    def stability():
        f = ho.solve(chain, cycle).coeffs
        g = ho.solve(chain, ho.build_cycle(chain, run.site, run.witness, wide)).coeffs
        return rel_residual(f - g, g)

    rec.check(f"window [{lo},{hi}] vs [{wide[0]},{wide[1]}]", "window stability of the lattice sum", "stability", stability)


SUITE_FUNCTIONS = {
    "theta": theta_suite,
    "sklyanin": sklyanin_suite,
    "intertwiner": intertwiner_suite,
    "bethe": bethe_suite,
    "monodromy": monodromy_suite,
    "holonomic": holonomic_suite,
}


def run_suite(name: str, run: RunConfig) -> ResidualReport:
    """Run one suite (or ``"all"``) under the configured precision mode."""
    names = SUITES if name == "all" else (name,)
    for n in names:
        if n not in SUITE_FUNCTIONS:
            raise KeyError(f"unknown suite {n!r}; choose from {', '.join(SUITES + ('all',))}")
    report = ResidualReport()
    report.parameters.update(run.describe())
    report.parameters["suite"] = name
    with precision(run.precision):
        for n in names:
            report.extend(SUITE_FUNCTIONS[n](run))
    report.parameters["suite"] = name
    return report

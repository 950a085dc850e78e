"""Command-line driver: ``ellbethe verify`` and ``ellbethe dump``.

Configuration files are flat ``key = value`` text, one entry per line, with
``#`` starting a comment.  Recognized keys::

    tau_re, tau_im        modular parameter (floats)
    eta_num, eta_den      eta = eta_num / eta_den in lowest terms
    spins                 comma-separated spins, e.g. ``1/2, 1/2``
    z_re, z_im            comma-separated parts of z_1..z_N
    lambda_ring           complex, Python syntax (``0.2+0.04j``)
    kappa                 complex; optional when a witness is given
    witness               ``n, m0, m1`` integrality witness
    j                     site the witness refers to (1-based)
    c                     complex
    nu                    integer in 0..r-1
    seed                  integer
    precision             ``double`` or ``extended``
    window                ``lo, hi``
    tolerances            ``key: value`` pairs separated by commas

Exit status is 0 when every check passes, 1 when a check fails and 2 for
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import holonomic as ho
from .bethe import ChainConfig, boundary_z, enumerate_basis, weight_zero_count
from .errors import EllBetheError
from .intertwiner import gauge_matrix
from .monodromy import bethe_psi
from .reports import dumps
from .sklyanin import Spin, baxter_r, l_operator, spin_rep
from .suites import DEFAULT_TOLERANCES, SUITES, RunConfig, desk_config, run_suite
from .theta import ModularParams, precision

DUMP_OBJECTS = ("baxter_r", "l_operator", "gauge_matrix", "bethe_basis", "boundary_z", "a_j", "psi", "solution")
DEFAULT_U = 0.1 + 0.05j

KNOWN_KEYS = {
    "tau_re", "tau_im", "eta_num", "eta_den", "spins", "z_re", "z_im", "lambda_ring", "kappa",
    "witness", "j", "c", "nu", "seed", "precision", "window", "tolerances",
}  # fmt: skip


class ConfigError(Exception):
    def __init__(self, message: str, line: int | None = None, path: str = "config"):
        self.line = line
        where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class _Entry:
    value: str
    line: int


def _read_entries(text: str, path: str) -> dict[str, _Entry]:
    entries: dict[str, _Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno, path)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, path)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first on line {entries[key].line})", lineno, path)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno, path)
        entries[key] = _Entry(value, lineno)
    return entries


def _list(value: str) -> list[str]:
    return [s.strip() for s in value.split(",") if s.strip()]


def parse_config(text: str, path: str = "config", seed: int | None = None, mode: str | None = None) -> RunConfig:
    """Parse a configuration file; missing keys fall back to the desk configuration."""
    entries = _read_entries(text, path)
    desk = desk_config()
    base = desk.chain

    def get(key, conv, default):
        if key not in entries:
            return default
        e = entries[key]
        try:
            return conv(e.value)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ConfigError(f"bad value for {key!r}: {e.value!r} ({exc})", e.line, path) from None

    def line_of(*keys):
        lines = [entries[k].line for k in keys if k in entries]
        return min(lines) if lines else None

    tau = complex(get("tau_re", float, base.params.tau.real), get("tau_im", float, base.params.tau.imag))
    eta_num = get("eta_num", int, base.params.eta_num)
    eta_den = get("eta_den", int, base.params.eta_den)
    try:
        params = ModularParams(tau, eta_num, eta_den)
    except EllBetheError as exc:
        raise ConfigError(str(exc), line_of("tau_re", "tau_im", "eta_num", "eta_den"), path) from None

    twice_spins = get("spins", lambda v: tuple(Spin.parse(Fraction(s)).twice_l for s in _list(v)), base.twice_spins)
    z_re = get("z_re", lambda v: [float(s) for s in _list(v)], [w.real for w in base.z])
    z_im = get("z_im", lambda v: [float(s) for s in _list(v)], [w.imag for w in base.z])
    if not (len(z_re) == len(z_im) == len(twice_spins)):
        raise ConfigError(
            f"{len(twice_spins)} spins but {len(z_re)} z_re and {len(z_im)} z_im values",
            line_of("spins", "z_re", "z_im"),
            path,
        )
    z = tuple(complex(a, b) for a, b in zip(z_re, z_im))
    seed_v = get("seed", int, desk.seed) if seed is None else seed
    witness = get("witness", lambda v: tuple(int(s) for s in _list(v)), desk.witness)
    if witness is not None and len(witness) != 3:
        raise ConfigError("witness needs three integers n, m0, m1", line_of("witness"), path)
    site = get("j", int, desk.site)
    if not 1 <= site <= len(twice_spins):
        raise ConfigError(f"site j = {site} out of range", line_of("j"), path)
    try:
        chain = ChainConfig(
            twice_spins,
            z,
            params,
            lambda_ring=get("lambda_ring", complex, base.lambda_ring),
            kappa=get("kappa", complex, 0j),
            c=get("c", complex, base.c),
            nu=get("nu", int, base.nu),
            seed=seed_v,
        )
    except ValueError as exc:
        raise ConfigError(str(exc), line_of("spins", "z_re", "z_im"), path) from None
    if "kappa" in entries and "witness" not in entries:
        witness = None
    if witness is not None:
        try:
            kappa = ho.kappa_from_witness(chain, site, witness)
        except EllBetheError as exc:
            raise ConfigError(str(exc), line_of("witness"), path) from None
        if "kappa" in entries and abs(chain.kappa - kappa) > ho.WITNESS_ATOL:
            raise ConfigError(f"kappa {chain.kappa} differs from the witness value {kappa}", line_of("kappa"), path)
        chain = ho.with_witness_kappa(chain, site, witness)
    if chain.kappa.imag <= 0:
        raise ConfigError("Im kappa must be positive (set kappa or a witness)", line_of("kappa", "witness"), path)

    mode_v = mode or get("precision", str, "double")
    if mode_v not in ("double", "extended"):
        raise ConfigError(f"precision must be 'double' or 'extended', got {mode_v!r}", line_of("precision"), path)
    window = get("window", lambda v: tuple(int(s) for s in _list(v)), desk.window)
    if len(window) != 2 or window[0] > window[1]:
        raise ConfigError(f"window must be 'lo, hi' with lo <= hi, got {window}", line_of("window"), path)

    def tolerances(v):
        out = {}
        for item in _list(v):
            key, _, num = item.partition(":")
            key = key.strip()
            if key not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance {key!r}")
            out[key] = float(num)
        return out

    tols = get("tolerances", tolerances, {})
    return RunConfig(chain, witness, site, window, seed_v, mode_v, tols)


def load_config(path: str | None, seed: int | None = None, mode: str | None = None) -> RunConfig:
    if path is None:
        return parse_config("", "defaults", seed, mode)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, path) from None
    return parse_config(text, path, seed, mode)


# --- dumps ------------------------------------------------------------------


def _basis_labels(config: ChainConfig) -> list[str]:
    return [" ".join(str(x) for x in path) for path in enumerate_basis(config).elements]


def _tensor_labels(dims) -> list[str]:
    return ["|" + ",".join(str(i) for i in idx) + ">" for idx in itertools.product(*[range(d) for d in dims])]


def dump_object(name: str, run: RunConfig, u: complex = DEFAULT_U, j: int | None = None, t=None) -> dict:
    chain = run.chain
    params = chain.params
    if name == "baxter_r":
        r = baxter_r(u, params)
        return {"object": name, "u": u, "basis": _tensor_labels((2, 2)), "matrix": r.matrix, "weights": list(r.weights)}
    if name == "l_operator":
        spin = chain.spins[0]
        op = l_operator(spin_rep(spin, params, chain.seed), u)
        return {
            "object": name,
            "u": u,
            "spin": str(spin),
            "basis": _tensor_labels((2, spin.dim)),
            "matrix": op.matrix,
            "weights": list(op.weights),
        }
    if name == "gauge_matrix":
        g = gauge_matrix(chain.level(0), u, params)
        return {"object": name, "u": u, "lambda": g.lam, "m": g.m, "m_inv": g.m_inv, "norm_c": g.norm_c}
    if name == "bethe_basis":
        basis = enumerate_basis(chain)
        return {
            "object": name,
            "space": str(chain.label),
            "r": chain.r,
            "weight_zero_dim": weight_zero_count(chain.twice_spins),
            "count": len(basis),
            "paths": [list(p) for p in basis.elements],
            "labels": _basis_labels(chain),
        }
    if name == "boundary_z":
        op = boundary_z(chain)
        return {
            "object": name,
            "domain": str(op.domain),
            "codomain": str(op.codomain),
            "domain_basis": _basis_labels(chain),
            "codomain_basis": _basis_labels(chain.rotated()),
            "matrix": op.matrix,
        }
    if name == "a_j":
        j = run.site if j is None else j
        op = ho.a_j(j, chain)
        return {
            "object": name,
            "j": j,
            "domain": str(op.domain),
            "codomain": str(op.codomain),
            "domain_basis": _basis_labels(chain),
            "codomain_basis": _basis_labels(chain.shifted(j)),
            "matrix": op.matrix,
        }
    if name == "psi":
        if t is None:
            t = [0.05 + 0.02j * (k + 1) + 0.13 * k for k in range(chain.big_m)]
        psi = bethe_psi(t, chain)
        return {"object": name, "t": list(t), "basis": _basis_labels(chain), "coefficients": psi.coeffs}
    if name == "solution":
        if run.witness is None:
            raise ConfigError("the solution needs a witness")
        cycle = ho.build_cycle(chain, run.site, run.witness, run.window)
        f = ho.solve(chain, cycle)
        return {
            "object": name,
            "witness": list(run.witness),
            "window": list(run.window),
            "active_points": [p.m for p in cycle.active],
            "basis": _basis_labels(chain),
            "coefficients": f.coeffs,
        }
    raise ConfigError(f"unknown object {name!r}")


# --- entry point ------------------------------------------------------------


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellbethe", description="Elliptic Bethe vectors and their difference equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite and write JSON/CSV reports")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--config", help="key = value configuration file (defaults: the desk configuration)")
    v.add_argument("--precision", choices=("double", "extended"))
    v.add_argument("--seed", type=int)
    v.add_argument("--out", default=".", help="output directory")

    d = sub.add_parser("dump", help="write one object as JSON")
    d.add_argument("object", choices=DUMP_OBJECTS)
    d.add_argument("--config")
    d.add_argument("--out", required=True, help="output JSON file")
    d.add_argument("--u", type=_complex_arg, default=DEFAULT_U, help="spectral parameter")
    d.add_argument("--j", type=int, help="site for a_j (default: the config's j)")
    d.add_argument("--t", type=_complex_arg, nargs="+", help="Bethe roots for psi")
    return parser


def _verify(args) -> int:
    run = load_config(args.config, args.seed, args.precision)
    report = run_suite(args.suite, run)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.suite}_report.json").write_text(report.to_json())
    (out / f"{args.suite}_residuals.csv").write_text(report.to_csv())
    for row in report.rows:
        print(f"{'PASS' if row.passed else 'FAIL'}  {row.residual:.3e} < {row.tolerance:.0e}  {row.check}")
    n_fail = len(report.failures())
    print(f"{args.suite}: {len(report.rows) - n_fail}/{len(report.rows)} checks passed; reports in {out}")
    return 0 if n_fail == 0 else 1


def _dump(args) -> int:
    run = load_config(args.config, None, None)
    with precision(run.precision):
        payload = dump_object(args.object, run, args.u, args.j, args.t)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True)
    out.write_text(dumps(payload))
    print(f"wrote {args.object} to {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        return _dump(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EllBetheError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end: ``fhlab <command> --symbol <path|json> ...``.

Exit codes: 0 ok, 1 bad configuration, 2 numerical failure, 3 acceptance
failure (``verify`` only).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .asymptotics import (corner_scaling_check, fit_exponent, jacobi_check, pure_jump_exact_logdet,
                          ratio_sweep)
from .eig import EigenNonConvergence
from .numerics import QuadratureError
from .specfun import fh_constant
from .spectra import canonical_check, limiting_set_check, spectrum
from .symbols import load_symbol, sigma_fourier, symbol_to_json
from .szego import (c_constants, check_u_asymptotics, geometric_mean, kernel_hat_closed,
                    kernel_hat_numeric, szego_constant, wiener_hopf)
from .toeplitz import SingularMatrix, build, logdet_lu

COMMANDS = ("coeffs", "constants", "det", "sweep", "fit", "oracle", "jacobi", "corner",
            "kernel", "ulemma", "spectrum", "limset", "verify")

KERNEL_GRID = np.linspace(-3.0, 3.0, 61)


class ConfigError(ValueError):
    pass


def _num(x) -> str | int | bool:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return x
    return format(float(x) + 0.0, ".17g")


def _json_num(x):
    v = _num(x)
    if isinstance(v, str) and not isinstance(x, str):
        f = float(v)
        return f if np.isfinite(f) else None
    return v


def _dyadic(text: str) -> list[int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise ConfigError(f"--dyadic expects lo:hi, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise ConfigError("--dyadic needs 1 <= lo <= hi")
    out = []
    n = lo
    while n <= hi:
        out.append(n)
        n *= 2
    return out


def _sizes(args, default: list[int] | None = None) -> list[int]:
    if args.n_list:
        try:
            ns = [int(t) for t in args.n_list.split(",") if t.strip()]
        except ValueError:
            raise ConfigError(f"--n-list expects integers, got {args.n_list!r}") from None
    elif args.dyadic:
        ns = _dyadic(args.dyadic)
    elif args.n is not None:
        ns = [args.n]
    elif default is not None:
        ns = default
    else:
        raise ConfigError("this command needs --n, --n-list or --dyadic")
    if any(n < 0 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConfigError("sizes must be non-negative and strictly ascending")
    return ns


def _single(args) -> int:
    ns = _sizes(args)
    if len(ns) != 1:
        raise ConfigError("this command takes a single --n")
    return ns[0]


def cmd_coeffs(spec, args):
    n = _single(args)
    s = sigma_fourier(spec, -n, n)
    return ["k", "sigma_re", "sigma_im"], [[k, c.real, c.imag] for k, c in zip(s.indices, s.coeffs)]


def cmd_constants(spec, args):
    tau = spec.tau
    g = geometric_mean(tau).log()
    e = szego_constant(tau).log()
    fh = fh_constant(spec.beta)
    wh = wiener_hopf(tau)
    rows = [
        ["log_geometric_mean", g.real, g.imag],
        ["log_szego_constant", e.real, e.imag],
        ["log_fh_constant", fh.log_abs, fh.arg],
        ["tau_plus_at_1", wh.plus_at_one.real, wh.plus_at_one.imag],
        ["tau_minus_at_1", wh.minus_at_one.real, wh.minus_at_one.imag],
    ]
    if abs(spec.beta.real) < 0.5 and not spec.integer_beta:
        cc = c_constants(spec.beta, wh)
        rows += [["c0", cc.c0.real, cc.c0.imag], ["c0_prime", cc.c0_prime.real, cc.c0_prime.imag]]
    return ["name", "re", "im"], rows


def cmd_det(spec, args):
    rows = []
    for n in _sizes(args):
        ld = logdet_lu(build(spec, n))
        rows.append([n, ld.log_abs, ld.arg, ld.is_zero])
    return ["n", "logabs_det", "arg_det", "exact_zero"], rows


def cmd_oracle(spec, args):
    if not spec.pure_jump:
        raise ConfigError("oracle needs tau = 1 (pure jump)")
    rows = []
    for n in _sizes(args):
        ld = pure_jump_exact_logdet(spec.beta, n)
        rows.append([n, ld.log_abs, ld.arg])
    return ["n", "logabs_det", "arg_det"], rows


def cmd_sweep(spec, args):
    rows = []
    for r in ratio_sweep(spec, _sizes(args), boundary_factor=args.boundary_factor):
        rm = r.ratio_minus_one if r.ratio_minus_one is not None else complex("nan")
        rows.append([r.n, r.logdet.log_abs, r.logdet.arg, r.prediction.log_abs, r.prediction.arg,
                     rm.real, rm.imag])
    return ["n", "logabs_det", "arg_det", "logabs_pred", "arg_pred",
            "ratio_minus_one_re", "ratio_minus_one_im"], rows


def cmd_fit(spec, args):
    f = fit_exponent(spec, _sizes(args))
    return (["slope_re", "slope_im", "beta_sq_re", "beta_sq_im", "unwrap_ambiguous"],
            [[f.estimate.real, f.estimate.imag, f.beta_sq.real, f.beta_sq.imag, f.unwrap_ambiguous]])


def cmd_jacobi(spec, args):
    rows = []
    for n in _sizes(args):
        r = jacobi_check(spec, n, args.p)
        rows.append([n, args.p, r.lhs.log_abs, r.lhs.arg, r.rhs.log_abs, r.rhs.arg, r.residual])
    return ["n", "p", "logabs_lhs", "arg_lhs", "logabs_rhs", "arg_rhs", "residual"], rows


def cmd_corner(spec, args):
    c = corner_scaling_check(spec, _sizes(args), args.p)
    rows = [[n, d.log_abs, d.arg, k.real, k.imag, c.slope.real, c.slope.imag,
             c.expected.real, c.expected.imag]
            for n, d, k in zip(c.n, c.det_x, c.constants)]
    return ["n", "logabs_det_x", "arg_det_x", "constant_re", "constant_im", "slope_re", "slope_im",
            "expected_re", "expected_im"], rows


def cmd_kernel(spec, args):
    num = kernel_hat_numeric(spec.beta, KERNEL_GRID)
    closed = kernel_hat_closed(spec.beta, KERNEL_GRID)
    rows = [[x, a.real, a.imag, b.real, b.imag] for x, a, b in zip(KERNEL_GRID, num, closed)]
    return ["xi", "numeric_re", "numeric_im", "closed_re", "closed_im"], rows


def cmd_ulemma(spec, args):
    rep = check_u_asymptotics(spec, _sizes(args, [25, 50, 100, 200]), which=args.which)
    rows = [[n, c.real, c.imag, r.real, r.imag] for n, c, r in zip(rep.n, rep.coefficients, rep.ratios)]
    return ["n", "coefficient_re", "coefficient_im", "ratio_re", "ratio_im"], rows


def cmd_spectrum(spec, args):
    n = _single(args)
    if args.functional:
        m = canonical_check(spec, n, args.functional.split(";"))
        rows = [[v.name, v.empirical.real, v.empirical.imag, v.symbol_side.real, v.symbol_side.imag,
                 v.deviation] for v in m.values]
        return ["functional", "empirical_re", "empirical_im", "symbol_re", "symbol_im", "deviation"], rows
    lam = spectrum(spec, n).eigenvalues
    order = np.lexsort((lam.imag, lam.real))
    return ["index", "lambda_re", "lambda_im"], [[i, lam[j].real, lam[j].imag] for i, j in enumerate(order)]


def cmd_limset(spec, args):
    rows = [[r.n, r.max_eig_to_range, r.max_range_to_eig] for r in limiting_set_check(spec, _sizes(args))]
    return ["n", "max_eig_to_range", "max_range_to_eig"], rows


HANDLERS = {
    "coeffs": cmd_coeffs, "constants": cmd_constants, "det": cmd_det, "sweep": cmd_sweep,
    "fit": cmd_fit, "oracle": cmd_oracle, "jacobi": cmd_jacobi, "corner": cmd_corner,
    "kernel": cmd_kernel, "ulemma": cmd_ulemma, "spectrum": cmd_spectrum, "limset": cmd_limset,
}


def _render(header, rows, fmt, meta) -> str:
    if fmt == "json":
        doc = {"rows": [dict(zip(header, (_json_num(v) for v in row))) for row in rows]}
        if meta is not None:
            doc = {"meta": meta, **doc}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    if meta is not None:
        for key, val in meta.items():
            buf.write(f"# {key}: {json.dumps(val)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fhlab", description="Toeplitz determinants with a jump singularity.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--symbol", help="symbol JSON file or inline JSON")
    sizes = p.add_mutually_exclusive_group()
    sizes.add_argument("--n", type=int)
    sizes.add_argument("--n-list", help="comma separated ascending sizes")
    sizes.add_argument("--dyadic", help="lo:hi, powers of two from lo to hi")
    p.add_argument("--p", type=int, default=1, help="corner size for jacobi/corner")
    p.add_argument("--functional", help="spectrum: ';'-separated functionals (pow1..pow4, abs2, re, im, dist2:re,im)")
    p.add_argument("--which", choices=("u", "v"), default="u", help="ulemma: coefficients of u or of v")
    p.add_argument("--boundary-factor", action="store_true",
                   help="sweep: include tau_+(1)^beta tau_-(1)^-beta in the prediction")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--no-meta", action="store_true", help="omit the metadata header")
    return p


def _verify(out) -> int:
    from .acceptance import format_result, run_criterion, CRITERIA

    failed = 0
    for name in CRITERIA:
        r = run_criterion(name)
        failed += not r.passed
        print(format_result(r), file=out, flush=True)
    return 3 if failed else 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "verify":
        return _verify(sys.stdout)
    try:
        if not args.symbol:
            raise ConfigError("--symbol is required")
        spec = load_symbol(args.symbol)
        header, rows = HANDLERS[args.command](spec, args)
    except (ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"fhlab: configuration error: {exc}", file=sys.stderr)
        return 1
    except (SingularMatrix, EigenNonConvergence, QuadratureError, ArithmeticError, RuntimeError) as exc:
        print(f"fhlab: numerical failure: {exc}", file=sys.stderr)
        return 2
    meta = None
    if not args.no_meta:
        meta = {
            "command": args.command,
            "symbol": symbol_to_json(spec),
            "versions": {"fhlab": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        }
    text = _render(header, rows, args.format, meta)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

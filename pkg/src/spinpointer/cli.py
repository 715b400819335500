"""Command-line entry point.

Exit codes: 0 ok, 2 usage or validation error, 3 I/O error, 4 sampler
envelope breach, 5 verification tolerance exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .asymptotics import FIT_MODEL, asymptote_sweep
from .core import FidelityResult, validate_spec
from .errors import EnvelopeBreach, SpecError
from .optimal_state import build_coupling_matrix, fidelity_sweep, optimal_fidelity
from .orthopoly import gauss_legendre
from .plotting import CSV_HEADER, MalformedCSV, render_svg, series_from_csv
from .povm_check import (
    GRAM_MAX_N,
    coupling_matrix_oracle,
    density_normalization,
    density_order,
    povm_completeness_gram,
)
from .protocol_mc import SamplerConfig, simulate_protocol

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_SAMPLER, EXIT_VERIFY = 0, 2, 3, 4, 5

TOL_MATRIX = 1e-10
TOL_NORM = 1e-10
TOL_GRAM = 1e-9


class UsageError(Exception):
    pass


def _fmt5(x: float) -> str:
    return f"{x:.5f}"


def _sig5(x: float) -> str:
    return f"{x:#.5g}"


def csv_row(res: FidelityResult) -> str:
    """fidelity to 5 decimals; 1-F and (1-F)(N+3)^2 to 5 significant digits."""
    n = res.spec.n_spins
    scaled = res.one_minus_f * (n + 3) ** 2
    return ",".join([str(n), str(res.spec.twice_m), _fmt5(res.fidelity), _sig5(res.one_minus_f), _sig5(scaled)])


def fidelity_json(res: FidelityResult) -> dict:
    return {
        "n": res.spec.n_spins,
        "twice_m": res.spec.twice_m,
        "fidelity": res.fidelity,
        "one_minus_f": res.one_minus_f,
        "mean_x": res.state.mean_x,
        "coefficients": list(res.state.coeffs),
    }


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _spec_from(args):
    try:
        return validate_spec(args.n, args.twice_m)
    except SpecError as exc:
        raise UsageError(f"{exc.rule}: {exc}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def cmd_fidelity(args) -> int:
    res = optimal_fidelity(_spec_from(args))
    if args.format == "json":
        sys.stdout.write(_dumps(fidelity_json(res)))
    else:
        sys.stdout.write(",".join(CSV_HEADER) + "\n" + csv_row(res) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not 1 <= args.n_min <= args.n_max:
        raise UsageError(f"need 1 <= n-min <= n-max, got {args.n_min}, {args.n_max}")
    modes = ["optimal", "parallel"] if args.mode == "both" else [args.mode]
    results = []
    for mode in modes:
        results.extend(fidelity_sweep(args.n_min, args.n_max, mode, workers=args.workers))
    if args.format == "json":
        text = _dumps([
            dict(fidelity_json(r), scaled_constant=r.one_minus_f * (r.spec.n_spins + 3) ** 2)
            for r in results
        ])
    else:
        text = ",".join(CSV_HEADER) + "\n" + "".join(csv_row(r) + "\n" for r in results)
    _write(text, args.out)
    if args.svg:
        csv_text = text if args.format == "csv" else (
            ",".join(CSV_HEADER) + "\n" + "".join(csv_row(r) + "\n" for r in results)
        )
        render_svg(series_from_csv([csv_text]), args.svg)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _spec_from(args)
    if args.shots < 1:
        raise UsageError("shots must be >= 1")
    try:
        config = SamplerConfig(args.seed, args.shots, args.envelope_grid, args.envelope_slack)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = simulate_protocol(spec, config, chunks=args.chunks, workers=args.workers)
    out = {
        "n": spec.n_spins,
        "twice_m": spec.twice_m,
        "shots": config.shots,
        "seed": config.seed,
        "chunks": max(1, args.chunks),
        "envelope_grid": config.envelope_grid,
        "envelope_slack": config.envelope_slack,
        "mean_fidelity_estimate": rep.mean_fidelity_estimate,
        "standard_error": rep.standard_error,
        "exact_fidelity": rep.exact_fidelity,
        "deviation_in_stderr": (
            (rep.mean_fidelity_estimate - rep.exact_fidelity) / rep.standard_error
            if rep.standard_error > 0 else None
        ),
        "accepted_fraction": rep.accepted_fraction,
    }
    if args.format == "json":
        sys.stdout.write(_dumps(out))
    else:
        keys = [k for k in out if k != "deviation_in_stderr"]
        sys.stdout.write(",".join(keys) + "\n" + ",".join(repr(out[k]) for k in keys) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _spec_from(args)
    if spec.n_spins > GRAM_MAX_N:
        raise UsageError(f"Gram check out of supported range: N <= {GRAM_MAX_N}, got {spec.n_spins}")
    order = args.quad_order or density_order(spec.n_spins)
    if order < spec.n_spins + 4:
        raise UsageError(f"quad-order must be >= N + 4 = {spec.n_spins + 4}")
    rule = gauss_legendre(order)

    dev_matrix = float(np.max(np.abs(coupling_matrix_oracle(spec, rule) - build_coupling_matrix(spec).dense())))
    dev_norm = abs(density_normalization(optimal_fidelity(spec).state, rule) - 1.0)
    gram = povm_completeness_gram(spec.n_spins, spec.m, gauss_legendre(2 * order))
    dev_gram = float(np.max(np.abs(gram - np.eye(len(gram)))))

    checks = [
        ("coupling_matrix_oracle", dev_matrix, TOL_MATRIX, ""),
        ("density_normalization", dev_norm, TOL_NORM, ""),
        ("povm_gram", dev_gram, TOL_GRAM, f" dim={len(gram)}"),
    ]
    ok = True
    sys.stdout.write(f"verify N={spec.n_spins} twice_m={spec.twice_m} quad_order={order}\n")
    for name, dev, tol, extra in checks:
        passed = dev <= tol
        ok &= passed
        sys.stdout.write(f"{name}{extra} max_dev={dev:.3e} tol={tol:.0e} {'PASS' if passed else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_plot(args) -> int:
    texts = []
    for path in args.input_csv:
        try:
            with open(path, newline="") as fh:
                texts.append(fh.read())
        except OSError as exc:
            sys.stderr.write(f"error: cannot read {path}: {exc}\n")
            return EXIT_IO
    try:
        series = series_from_csv(texts)
    except MalformedCSV as exc:
        raise UsageError(f"malformed CSV: {exc}") from None
    render_svg(series, args.out)
    return EXIT_OK


def cmd_asymptote(args) -> int:
    rep = asymptote_sweep(args.n)
    out = {
        "n_values": rep.n_values,
        "one_minus_f": rep.one_minus_f,
        "scaled": rep.scaled,
        "extrapolated_constant": rep.extrapolated_constant,
        "fit_model": FIT_MODEL,
        "fit_model_note": "correction terms are a modelling choice; only the constant is physical",
        "fit_coefficients": list(rep.fit_coefficients),
        "residuals": rep.residuals,
    }
    sys.stdout.write(_dumps(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinpointer", description="Optimal N-spin direction indicators.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def spec_args(sp, n_required=True):
        sp.add_argument("--n", type=int, required=n_required, help="number of spins N")
        sp.add_argument("--twice-m", type=int, default=None, help="2m; defaults to the lowest legal m")

    sp = sub.add_parser("fidelity", help="optimal fidelity and coefficients for one (N, m)")
    spec_args(sp)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_fidelity)

    sp = sub.add_parser("sweep", help="fidelity for a range of N")
    sp.add_argument("--n-min", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--mode", choices=["optimal", "parallel", "both"], default="optimal")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.add_argument("--svg", default=None, help="also render the 1-F plot to this SVG path")
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", help="Monte Carlo run of the protocol")
    spec_args(sp)
    sp.add_argument("--shots", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--envelope-grid", type=int, default=4096)
    sp.add_argument("--envelope-slack", type=float, default=1.000001)
    sp.add_argument("--chunks", type=int, default=1, help="split shots into chunks seeded seed^i")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="quadrature and POVM completeness checks")
    spec_args(sp)
    sp.add_argument("--quad-order", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("plot", help="render sweep CSV as SVG")
    sp.add_argument("input_csv", nargs="+")
    sp.add_argument("--out", required=True, help="output SVG path")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("asymptote", help="(1-F)(N+3)^2 and its extrapolated limit")
    sp.add_argument("--n", type=int, nargs="+", default=[250, 500, 1000, 2000])
    sp.set_defaults(func=cmd_asymptote)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"spinpointer {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except EnvelopeBreach as exc:
        sys.stderr.write(
            f"spinpointer {args.command}: sampler error: {exc}\n"
            "hint: raise --envelope-grid or --envelope-slack and rerun\n"
        )
        return EXIT_SAMPLER
    except OSError as exc:
        sys.stderr.write(f"spinpointer {args.command}: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

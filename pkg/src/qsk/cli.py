"""Command-line front end.

Subcommands emit machine-readable JSON/CSV for the library's main
workflows: dual-frame construction (covm), state reconstruction from
measured probabilities (reconstruct), Q-function grids of Gaussian
quasistates (qgrid), homodyne-sampling reconstruction (homodyne), and
two-qubit entanglement analysis (entangle).

Exit codes: 0 success, 2 input/validation error, 3 domain error
(singular kernel, unphysical state, singular filter parameters).
Complex numbers serialize as [re, im] pairs; every output carries a
schema-version field (JSON) or '#' header lines (CSV) echoing the
effective configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import frames as fr
from . import phase_space as ps
from . import entanglement as ent
from .operator_algebra import FockSpace, hermitian_eigen

SCHEMA_VERSION = 1

# Global defaults echoed in every output for reproducibility.
DEFAULTS = {
    "cutoff": 40,
    "r_max": 6.0,
    "r_step": 0.05,
    "extent": 2.5,
    "resolution": 101,
}

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3


class _InputError(ValueError):
    """Invalid user input (maps to exit code 2)."""


def _parse_complex(text: str) -> complex:
    """Parse 're' or 're,im' into a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise _InputError(f"cannot parse complex value {text!r}; use 're' or 're,im'")


def _cnum(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _cmat(m) -> list:
    return [[_cnum(z) for z in row] for row in np.asarray(m)]


def _rvec(v) -> list:
    return [float(x) for x in np.asarray(v)]


def _json_header(command: str, config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "defaults": dict(DEFAULTS),
        "config": config,
    }


def _write_json(path, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _csv_comments(config: dict) -> list:
    lines = [f"# schema_version={SCHEMA_VERSION}"]
    for key, value in DEFAULTS.items():
        lines.append(f"# default_{key}={value}")
    for key, value in config.items():
        lines.append(f"# {key}={value}")
    return lines


def _load_frame_arg(args) -> fr.Frame:
    if getattr(args, "builtin", None):
        if args.builtin == "tetrahedron":
            return fr.tetrahedron_frame()
        raise _InputError(f"unknown builtin frame {args.builtin!r}")
    if not getattr(args, "frame", None):
        raise _InputError("provide --frame FILE or --builtin tetrahedron")
    try:
        return fr.load_frame(args.frame)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise _InputError(f"malformed frame file {args.frame}: {exc}") from exc


def cmd_covm(args) -> int:
    frame = _load_frame_arg(args)
    kernel = fr.gram_kernel(frame)
    if args.mode == "exact" and kernel.mode != "exact":
        print("error: kernel is singular or frame is not of size dim^2; exact mode impossible", file=sys.stderr)
        return EXIT_DOMAIN
    dual = fr.covm(frame)
    quasistates = []
    for label, gamma in zip(frame.labels, dual.operators):
        spectrum = hermitian_eigen(gamma, tol=1e-8)
        quasistates.append(
            {
                "label": label,
                "matrix": _cmat(gamma),
                "eigenvalues": _rvec(spectrum.eigenvalues),
            }
        )
    payload = _json_header(
        "covm",
        {
            "frame": args.frame or f"builtin:{args.builtin}",
            "dim": frame.dim,
            "size": len(frame),
            "requested_mode": args.mode,
        },
    )
    payload.update(
        {
            "mode": dual.mode,
            "completeness_rank": dual.rank,
            "kernel": [_rvec(row) for row in kernel.matrix],
            "kernel_inverse": [_rvec(row) for row in kernel.inverse],
            "quasistates": quasistates,
        }
    )
    _write_json(args.out, payload)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    frame = _load_frame_arg(args)
    try:
        with open(args.probs, "r", encoding="utf-8") as fh:
            values = json.load(fh)
        weights = np.asarray(values, dtype=float)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise _InputError(f"malformed probability file {args.probs}: {exc}") from exc
    if weights.ndim != 1 or len(weights) != len(frame):
        raise _InputError(
            f"probability vector has length {weights.size}, frame has {len(frame)} states"
        )
    dual = fr.covm(frame)
    rho = fr.reconstruct(weights, dual)
    hermiticity = float(np.abs(rho - rho.conj().T).max())
    spectrum = hermitian_eigen(0.5 * (rho + rho.conj().T), tol=1e-6)
    payload = _json_header(
        "reconstruct",
        {
            "frame": args.frame or f"builtin:{args.builtin}",
            "probs": args.probs,
            "mode": dual.mode,
            "completeness_rank": dual.rank,
        },
    )
    payload.update(
        {
            "rho": _cmat(rho),
            "eigenvalues": _rvec(spectrum.eigenvalues),
            "trace": _cnum(np.trace(rho)),
            "hermiticity_deviation": hermiticity,
        }
    )
    _write_json(args.out, payload)
    return EXIT_OK


def _qgrid_params(args) -> ps.GaussianFilterParams:
    if args.preset:
        return ps.table_preset(args.preset)
    if args.s is None:
        raise _InputError("provide --preset NAME or explicit --s/--p/--q values")
    return ps.GaussianFilterParams(
        s=_parse_complex(args.s),
        p=_parse_complex(args.p),
        q=_parse_complex(args.q),
    )


def cmd_qgrid(args) -> int:
    try:
        params = _qgrid_params(args)
    except ValueError as exc:
        if isinstance(exc, _InputError):
            raise
        raise _InputError(str(exc)) from exc
    axis = np.linspace(-args.extent, args.extent, args.resolution)
    config = {
        "s": f"{complex(params.s)}",
        "p": f"{complex(params.p)}",
        "q": f"{complex(params.q)}",
        "extent": args.extent,
        "resolution": args.resolution,
        "numeric_cutoff": args.numeric,
    }

    rows = []
    for re_alpha in axis:
        for im_alpha in axis:
            alpha = complex(re_alpha, im_alpha)
            value = ps.analytic_q(params, alpha)
            rows.append((re_alpha, im_alpha, alpha, value))

    def write_grid(path, value_at):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for line in _csv_comments(config):
                fh.write(line + "\n")
            writer = csv.writer(fh)
            writer.writerow(["re_alpha", "im_alpha", "re_q", "im_q", "abs_q", "arg_q"])
            for re_alpha, im_alpha, alpha, analytic in rows:
                value = value_at(alpha, analytic)
                writer.writerow(
                    [
                        repr(float(re_alpha)),
                        repr(float(im_alpha)),
                        repr(value.real),
                        repr(value.imag),
                        repr(abs(value)),
                        repr(float(np.angle(value))),
                    ]
                )

    write_grid(args.out, lambda alpha, analytic: analytic)

    if args.numeric:
        op = ps.gaussian_quasistate(params, FockSpace(args.numeric))
        numeric_path = args.numeric_out or (args.out + ".numeric.csv")
        deviation = 0.0
        cache = {}

        def numeric_value(alpha, analytic):
            nonlocal deviation
            value = cache.get(alpha)
            if value is None:
                value = ps.numeric_q(op, alpha)
                cache[alpha] = value
            deviation = max(deviation, abs(value - analytic))
            return value

        write_grid(numeric_path, numeric_value)
        print(f"numeric grid written to {numeric_path}")
        print(f"numeric max deviation: {deviation:.6e} (cutoff {args.numeric})")
    return EXIT_OK


def cmd_homodyne(args) -> int:
    if (args.simulate is None) == (args.ingest is None):
        raise _InputError("choose exactly one source: --simulate ALPHA or --ingest CSV")
    if args.simulate is not None:
        alpha = _parse_complex(args.simulate)
        samples = ps.sample_quadratures(alpha, args.n, args.seed)
        source = f"simulate(alpha={alpha}, n={args.n}, seed={args.seed})"
    else:
        try:
            samples = ps.read_quadrature_csv(args.ingest)
        except (OSError, ValueError) as exc:
            raise _InputError(f"cannot ingest {args.ingest}: {exc}") from exc
        if not samples:
            raise _InputError(f"no samples in {args.ingest}")
        source = f"ingest({args.ingest})"

    config = {
        "source": source,
        "cutoff": args.cutoff,
        "r_max": args.r_max,
        "r_step": args.r_step,
        "n_samples": len(samples),
    }
    if args.samples_out:
        ps.write_quadrature_csv(args.samples_out, samples, metadata=config)

    space = FockSpace(args.cutoff)
    result = ps.homodyne_reconstruct(samples, space, r_max=args.r_max, r_step=args.r_step)

    # Elementwise standard errors from a 10-way split of the sample list.
    stderr = None
    if len(samples) >= 20:
        blocks = np.array_split(np.arange(len(samples)), 10)
        block_estimates = []
        for block in blocks:
            sub = [samples[i] for i in block]
            block_estimates.append(
                ps.homodyne_reconstruct(sub, space, r_max=args.r_max, r_step=args.r_step).matrix
            )
        stderr = np.std(np.stack(block_estimates), axis=0, ddof=1) / np.sqrt(len(blocks))

    payload = _json_header("homodyne", config)
    payload.update(
        {
            "rho": _cmat(result.matrix),
            "trace": result.trace,
            "min_eigenvalue": result.min_eigenvalue,
            "stderr_abs": None if stderr is None else [[float(abs(z)) for z in row] for row in stderr],
        }
    )
    _write_json(args.out, payload)
    return EXIT_OK


def cmd_entangle(args) -> int:
    state = ent.TwoQubitState(rho_x=args.rho_x, rho_y=args.rho_y, rho_z=args.rho_z)
    r = args.mix_r
    if not 0.0 < r <= 1.0:
        raise _InputError(f"--mix-r must lie in (0, 1], got {r}")

    eigenvalues = ent.bell_eigenvalues(state)
    dist = ent.entanglement_quasiprobability(state)
    conv = ent.convolved_distribution(state, r)
    verdict, q = ent.separability_verdict(state)
    threshold = ent.positivity_threshold(state)
    local_eigs = [(1 + r) / (2 * r), -(1 - r) / (2 * r)]

    target = state.matrix()
    residual_p = float(np.abs(ent.reconstruct_two_qubit(dist) - target).max())
    residual_pkk = float(np.abs(ent.reconstruct_two_qubit(conv, r) - target).max())

    config = {
        "rho_x": args.rho_x,
        "rho_y": args.rho_y,
        "rho_z": args.rho_z,
        "mix_r": r,
    }
    payload = _json_header("entangle", config)
    payload.update(
        {
            "bell_eigenvalues": _rvec(eigenvalues),
            "verdict": verdict,
            "q": q,
            "labels": list(ent.PAULI_LABELS),
            "quasiprobability": [_rvec(row) for row in dist.values],
            "convolved": [_rvec(row) for row in conv.values],
            "min_quasiprobability": float(dist.values.min()),
            "min_convolved": float(conv.values.min()),
            "positivity_threshold": threshold,
            "local_quasistate_eigenvalues": local_eigs,
            "reconstruction_residual_quasiprobability": residual_p,
            "reconstruction_residual_convolved": residual_pkk,
        }
    )
    _write_json(args.out, payload)

    if args.dist_csv:
        for name, values in (("p", dist.values), ("pkk", conv.values)):
            path = f"{args.dist_csv}_{name}.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                for line in _csv_comments(config):
                    fh.write(line + "\n")
                writer = csv.writer(fh)
                writer.writerow([""] + list(ent.PAULI_LABELS))
                for label, row in zip(ent.PAULI_LABELS, values):
                    writer.writerow([label] + [repr(float(v)) for v in row])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsk",
        description="Quasistate/quasiprobability numerics: dual decompositions of quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_covm = sub.add_parser("covm", help="Gram kernel, its inverse, and the dual quasistates of a frame")
    p_covm.add_argument("--frame", help="frame JSON file")
    p_covm.add_argument("--builtin", choices=["tetrahedron"], help="use a built-in frame")
    p_covm.add_argument("--mode", choices=["auto", "exact", "pseudo"], default="auto",
                        help="require exact kernel inversion or allow pseudo fallback (default auto)")
    p_covm.add_argument("--out", required=True, help="output JSON path")
    p_covm.set_defaults(func=cmd_covm)

    p_rec = sub.add_parser("reconstruct", help="reconstruct a density matrix from Born probabilities")
    p_rec.add_argument("--frame", help="frame JSON file")
    p_rec.add_argument("--builtin", choices=["tetrahedron"], help="use a built-in frame")
    p_rec.add_argument("--probs", required=True, help="JSON array of measured probabilities")
    p_rec.add_argument("--out", required=True, help="output JSON path")
    p_rec.set_defaults(func=cmd_reconstruct)

    p_grid = sub.add_parser("qgrid", help="Q-function grid of a Gaussian-filter quasistate")
    p_grid.add_argument("--preset", choices=sorted(ps.TABLE_PRESETS), help="named filter parameters")
    p_grid.add_argument("--s", help="s parameter as 're' or 're,im'")
    p_grid.add_argument("--p", default="0", help="p parameter (default 0)")
    p_grid.add_argument("--q", default="0", help="q parameter (default 0)")
    p_grid.add_argument("--extent", type=float, default=DEFAULTS["extent"],
                        help=f"grid half-width (default {DEFAULTS['extent']})")
    p_grid.add_argument("--resolution", type=int, default=DEFAULTS["resolution"],
                        help=f"points per axis (default {DEFAULTS['resolution']})")
    p_grid.add_argument("--numeric", type=int, metavar="CUTOFF",
                        help="also evaluate the quasistate matrix at this Fock cutoff")
    p_grid.add_argument("--numeric-out", help="path for the numeric grid (default OUT.numeric.csv)")
    p_grid.add_argument("--out", required=True, help="output CSV path")
    p_grid.set_defaults(func=cmd_qgrid)

    p_hom = sub.add_parser("homodyne", help="density-matrix estimate from quadrature samples")
    p_hom.add_argument("--simulate", metavar="ALPHA", help="simulate a coherent state 're' or 're,im'")
    p_hom.add_argument("--n", type=int, default=100000, help="sample count for --simulate (default 100000)")
    p_hom.add_argument("--seed", type=int, default=0, help="RNG seed for --simulate (default 0)")
    p_hom.add_argument("--ingest", metavar="CSV", help="read samples from a quadrature CSV")
    p_hom.add_argument("--cutoff", type=int, default=DEFAULTS["cutoff"],
                       help=f"Fock cutoff (default {DEFAULTS['cutoff']})")
    p_hom.add_argument("--r-max", type=float, default=DEFAULTS["r_max"],
                       help=f"radial grid extent (default {DEFAULTS['r_max']})")
    p_hom.add_argument("--r-step", type=float, default=DEFAULTS["r_step"],
                       help=f"radial grid step (default {DEFAULTS['r_step']})")
    p_hom.add_argument("--samples-out", help="also write the samples as a quadrature CSV")
    p_hom.add_argument("--out", required=True, help="output JSON path")
    p_hom.set_defaults(func=cmd_homodyne)

    p_ent = sub.add_parser("entangle", help="entanglement analysis of the two-qubit family")
    p_ent.add_argument("--rho-x", type=float, required=True)
    p_ent.add_argument("--rho-y", type=float, required=True)
    p_ent.add_argument("--rho-z", type=float, required=True)
    p_ent.add_argument("--mix-r", type=float, required=True,
                       help="mix parameter of the uniform kernel, in (0, 1]")
    p_ent.add_argument("--dist-csv", metavar="PREFIX",
                       help="also write labeled 6x6 CSVs PREFIX_p.csv and PREFIX_pkk.csv")
    p_ent.add_argument("--out", required=True, help="output JSON path")
    p_ent.set_defaults(func=cmd_entangle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ps.SingularFilterError, ent.UnphysicalStateError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

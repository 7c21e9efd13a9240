"""Command-line front end.

Subcommands:

* ``prepare``        preparation config JSON -> density matrix + metrics
* ``simulate``       density matrix -> Poisson-noised 16-setting counts
* ``reconstruct``    counts -> linear + maximum-likelihood estimates
* ``metrics``        density matrix -> purity/entropy/concurrence
* ``compare``        two density matrices -> overlap report
* ``calibrate-dbs``  Stokes probe data -> splitter Jones matrices
* ``fixtures``       export a bundled reference dataset as JSON files
* ``paper``          recompute the bundled published reference results
                     and report pass/fail per tolerance

Exit codes: 0 success, 1 reference-reproduction failure, 2 input error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import serialize
from .datasets import DATASET_NAMES, export_dataset, load_dataset
from .optics import CalibrationError, jones_from_stokes_probes
from .prepare import prepare_from_config
from .states import compare_states, concurrence, entropy, fidelity, purity
from .tomography import (
    BootstrapError,
    ConvergenceError,
    LinearInversionTomography,
    MaximumLikelihoodTomography,
    bootstrap_errors,
    build_projectors,
    simulate_counts,
)
from .validation import ValidationError, validate_density_matrix

EXIT_OK = 0
EXIT_REPRODUCTION = 1
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3

# eigenvalue clamp when computing metrics on 4-decimal published matrices
_REFERENCE_EIG_FLOOR = 5e-2
_HARD_TOL = 0.01
_SOFT_FIDELITY_FLOOR = 0.90
_DBS_CAVEAT = (
    "count-based reconstructions use identity splitter matrices; the "
    "published matrices were built with a splitter calibration that was "
    "never published, so the soft fidelity rows carry that systematic gap"
)


def _write_or_print(payload, out_path):
    if out_path:
        serialize.dump_json(payload, out_path)
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _load_density(path):
    obj = serialize.load_json(path)
    if isinstance(obj, dict) and "rho" in obj:
        obj = obj["rho"]
    return serialize.matrix_from_json(obj, (4, 4), str(path))


def _metrics_block(rho, eig_floor):
    return {
        "purity": purity(rho),
        "entropy": entropy(rho, eig_floor=eig_floor),
        "concurrence": concurrence(rho),
        "eigenvalues": [float(v) for v in np.linalg.eigvalsh(np.asarray(rho))],
    }


def _projectors_from_args(args):
    settings = None
    if getattr(args, "settings", None):
        settings = serialize.settings_from_json(
            serialize.load_json(args.settings), str(args.settings)
        )
    transmit = reflect = None
    if getattr(args, "dbs", None):
        transmit, reflect = serialize.dbs_from_json(
            serialize.load_json(args.dbs), str(args.dbs)
        )
    return build_projectors(settings, transmit, reflect)


def cmd_prepare(args):
    config = serialize.load_json(args.config)
    rho = prepare_from_config(config)
    payload = {
        "rho": serialize.matrix_to_json(rho),
        "metrics": _metrics_block(rho, 1e-10),
    }
    _write_or_print(payload, args.out)
    return EXIT_OK


def cmd_simulate(args):
    rho = _load_density(args.state)
    # tolerate lightly rounded inputs; negative Born probabilities clip to 0
    validate_density_matrix(rho, atol=1e-3, eig_floor=_REFERENCE_EIG_FLOOR, name="state")
    pset = _projectors_from_args(args)
    record = simulate_counts(
        rho, pset, total=args.total, seed=args.seed, duration_s=args.duration_s
    )
    _write_or_print(serialize.counts_to_json(record), args.out)
    return EXIT_OK


def cmd_reconstruct(args):
    record = serialize.counts_from_json(serialize.load_json(args.counts), str(args.counts))
    pset = _projectors_from_args(args)
    likelihood = "poisson" if args.exact_poisson else "gaussian"
    estimator = MaximumLikelihoodTomography(pset, likelihood=likelihood)
    converged = True
    try:
        estimator.fit(record)
    except ConvergenceError as exc:
        converged = False
        print(f"warning: {exc}", file=sys.stderr)
    report = {
        "method": "mle",
        "likelihood_form": likelihood,
        "converged": converged,
        "rho": serialize.matrix_to_json(estimator.rho_),
        "likelihood": estimator.cost_,
        "seed_cost": estimator.seed_cost_,
        "iterations": estimator.iterations_,
        "n_evaluations": estimator.n_evaluations_,
        "eigenvalues": [float(v) for v in np.linalg.eigvalsh(estimator.rho_)],
        "metrics": _metrics_block(estimator.rho_, 1e-10),
        "total": estimator.total_,
        "condition_number": pset.condition_number,
        "linear": {
            "rho": serialize.matrix_to_json(estimator.rho_linear_),
            "eigenvalues": [float(v) for v in estimator.linear_eigenvalues_],
            "is_physical": bool(estimator.linear_eigenvalues_.min() >= -1e-10),
        },
    }
    if converged and args.resamples:
        errors = bootstrap_errors(
            record,
            pset,
            resamples=args.resamples,
            master_seed=args.seed,
            likelihood=likelihood,
        )
        report["errors"] = {
            "delta_real": [[float(v) for v in row] for row in errors.delta_real],
            "delta_imag": [[float(v) for v in row] for row in errors.delta_imag],
            "resamples": errors.resamples,
            "used": errors.used,
            "excluded": errors.excluded,
            "master_seed": errors.master_seed,
        }
    _write_or_print(report, args.out)
    return EXIT_OK if converged else EXIT_NONCONVERGENCE


def cmd_metrics(args):
    rho = _load_density(args.state)
    payload = _metrics_block(rho, args.eig_floor)
    payload["trace"] = float(np.asarray(rho).trace().real)
    _write_or_print(payload, args.out)
    return EXIT_OK


def cmd_compare(args):
    rho_a = _load_density(args.a)
    rho_b = _load_density(args.b)
    report = compare_states(rho_a, rho_b, eig_floor=args.eig_floor)
    _write_or_print(report.as_dict(), args.out)
    return EXIT_OK


def cmd_calibrate_dbs(args):
    transmit_pairs, reflect_pairs = serialize.probe_pairs_from_json(
        serialize.load_json(args.probes), str(args.probes)
    )
    transmit = jones_from_stokes_probes(transmit_pairs, residual_tol=args.residual_tol)
    reflect = jones_from_stokes_probes(reflect_pairs, residual_tol=args.residual_tol)
    _write_or_print(serialize.dbs_to_json(transmit, reflect), args.out)
    return EXIT_OK


def cmd_fixtures(args):
    try:
        written = export_dataset(args.name, args.dir)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    for stem in sorted(written):
        print(f"wrote {written[stem]}")
    return EXIT_OK


def _reference_rows(name):
    """Hard tolerance checks recomputed from one dataset's published matrices."""
    data = load_dataset(name)
    reported = data.reported
    theory, exp = data.rho_theory, data.rho_exp
    floor = _REFERENCE_EIG_FLOOR
    return data, (
        ("purity_theory", purity(theory), reported.purity_theory),
        ("entropy_theory", entropy(theory, eig_floor=floor), reported.entropy_theory),
        ("purity_exp", purity(exp), reported.purity_exp),
        ("entropy_exp", entropy(exp, eig_floor=floor), reported.entropy_exp),
        ("fidelity", fidelity(theory, exp, eig_floor=floor), reported.fidelity),
    )


def cmd_paper(args):
    names = (args.dataset,) if args.dataset else DATASET_NAMES
    rows = []
    for name in names:
        if name not in DATASET_NAMES:
            print(
                f"error: unknown dataset {name!r}; available: {', '.join(DATASET_NAMES)}",
                file=sys.stderr,
            )
            return EXIT_INPUT
        data, checks = _reference_rows(name)
        for quantity, computed, reference in checks:
            rows.append(
                {
                    "dataset": name,
                    "quantity": quantity,
                    "reference": float(reference),
                    "computed": float(computed),
                    "difference": float(abs(computed - reference)),
                    "tolerance": _HARD_TOL,
                    "kind": "hard",
                    "passed": bool(abs(computed - reference) <= _HARD_TOL),
                }
            )
        refit = MaximumLikelihoodTomography().fit(data.counts)
        overlap = fidelity(data.rho_exp, refit.rho_, eig_floor=_REFERENCE_EIG_FLOOR)
        rows.append(
            {
                "dataset": name,
                "quantity": "refit_fidelity",
                "reference": _SOFT_FIDELITY_FLOOR,
                "computed": float(overlap),
                "difference": float(overlap - _SOFT_FIDELITY_FLOOR),
                "tolerance": None,
                "kind": "soft",
                "passed": bool(overlap >= _SOFT_FIDELITY_FLOOR),
            }
        )

    header = f"{'dataset':<16} {'quantity':<16} {'reference':>10} {'computed':>10} {'diff':>8} {'kind':>5}  status"
    print(header)
    print("-" * len(header))
    for row in rows:
        status = "pass" if row["passed"] else "FAIL"
        print(
            f"{row['dataset']:<16} {row['quantity']:<16} {row['reference']:>10.4f} "
            f"{row['computed']:>10.4f} {row['difference']:>8.4f} {row['kind']:>5}  {status}"
        )
    hard = [row for row in rows if row["kind"] == "hard"]
    failed = [row for row in hard if not row["passed"]]
    all_hard_passed = not failed
    print()
    print(f"hard rows passed: {len(hard) - len(failed)}/{len(hard)}")
    for row in failed:
        print(
            f"FAILED: {row['dataset']} {row['quantity']} computed {row['computed']:.4f} "
            f"vs reference {row['reference']:.4f} (tolerance {row['tolerance']})"
        )
    print(f"note: {_DBS_CAVEAT}")
    if args.out:
        serialize.dump_json(
            {"rows": rows, "all_hard_passed": all_hard_passed, "note": _DBS_CAVEAT},
            args.out,
        )
    return EXIT_OK if all_hard_passed else EXIT_REPRODUCTION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ququart",
        description=(
            "Model biphoton ququart preparation, simulate 16-setting "
            "coincidence tomography, and reconstruct density matrices."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="build a density matrix from a preparation config")
    p.add_argument("--config", required=True, help="preparation config JSON path")
    p.add_argument("--out", help="output JSON path (default: print to stdout)")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("simulate", help="draw Poisson-noised counts for a state")
    p.add_argument("--state", required=True, help="density matrix JSON path")
    p.add_argument("--total", type=float, default=10000.0, help="total pair number N")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--duration-s", type=float, default=1.0, help="recorded duration")
    p.add_argument("--settings", help="analysis settings JSON (default: embedded table)")
    p.add_argument("--dbs", help="splitter calibration JSON")
    p.add_argument("--out", help="output counts JSON path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="reconstruct a density matrix from counts")
    p.add_argument("--counts", required=True, help="counts JSON path")
    p.add_argument("--settings", help="analysis settings JSON (default: embedded table)")
    p.add_argument("--dbs", help="splitter calibration JSON")
    p.add_argument(
        "--resamples",
        type=int,
        default=0,
        help="bootstrap resamples for error bars (0 disables, minimum 50)",
    )
    p.add_argument("--seed", type=int, default=0, help="bootstrap master seed")
    p.add_argument(
        "--exact-poisson",
        action="store_true",
        help="use the exact Poisson log-likelihood instead of its Gaussian approximation",
    )
    p.add_argument("--out", help="output report JSON path")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("metrics", help="compute figures of merit for a density matrix")
    p.add_argument("--state", required=True, help="density matrix JSON path")
    p.add_argument(
        "--eig-floor",
        type=float,
        default=1e-10,
        help="negative-eigenvalue clamp (raise for matrices rounded to few decimals)",
    )
    p.add_argument("--out", help="output JSON path")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("compare", help="compare two density matrices")
    p.add_argument("--a", required=True, help="first density matrix JSON path")
    p.add_argument("--b", required=True, help="second density matrix JSON path")
    p.add_argument("--eig-floor", type=float, default=1e-10, help="negative-eigenvalue clamp")
    p.add_argument("--out", help="output JSON path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser(
        "calibrate-dbs",
        help="deduce splitter Jones matrices from Stokes probe measurements",
    )
    p.add_argument("--probes", required=True, help="probe measurements JSON path")
    p.add_argument(
        "--residual-tol",
        type=float,
        default=1e-3,
        help="maximum per-probe model residual as a fraction of probe intensity",
    )
    p.add_argument("--out", help="output calibration JSON path")
    p.set_defaults(func=cmd_calibrate_dbs)

    p = sub.add_parser("fixtures", help="work with the bundled reference datasets")
    fixtures_sub = p.add_subparsers(dest="action", required=True)
    q = fixtures_sub.add_parser("export", help="write a dataset as CLI-ready JSON files")
    q.add_argument("name", choices=DATASET_NAMES, help="dataset to export")
    q.add_argument("--dir", required=True, help="output directory")
    q.set_defaults(func=cmd_fixtures)

    p = sub.add_parser(
        "paper",
        help=(
            "recompute the bundled published reference results and check them "
            "against their quoted values"
        ),
    )
    p.add_argument("--dataset", help="restrict to one dataset (default: all four)")
    p.add_argument("--out", help="write the row-by-row report JSON here")
    p.set_defaults(func=cmd_paper)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CalibrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BootstrapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())

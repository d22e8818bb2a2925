"""Command-line interface.

Subcommands: solve, classify, curves, oracle, study {scaling|ritz|conditioning},
gen-pair.  Exit codes: 0 pass, 1 study verdict failure, 2 input error.
All JSON output is deterministic for fixed inputs and seeds.
"""

import argparse
import json
import sys

import numpy as np

from . import curves as curves_mod
from . import harness, oracle, rqi
from .classify import Kind, classify as run_classify, eigvec_set
from .errors import TwoDevpError
from .kernels import hermitian_eig
from .model import Triplet, load_pair, load_triplet, residual, save_pair

SIMPLE_WINDOWS = {"lambda": (3.3, 4.7), "mu": (1.6, 2.4), "x": (1.6, 2.4)}
MULTIPLE_WINDOWS = {"lambda": (3.3, 4.7), "mu": (3.3, 4.7), "x": (1.6, 2.4)}
RITZ_WINDOWS = {"theta": (1.6, 2.4), "nu": (0.8, 1.4)}


def _emit(doc, path):
    text = json.dumps(doc, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _auto_x0(pair, mu0, lam0):
    w, v = hermitian_eig(pair.a - mu0 * pair.c)
    return v[:, int(np.argmin(np.abs(w - lam0)))]


def cmd_solve(args):
    pair = load_pair(args.pair)
    if args.x0:
        x0 = load_triplet(args.x0).x
    else:
        x0 = _auto_x0(pair, args.mu0, args.lambda0)
    t0 = Triplet.normalized(args.mu0, args.lambda0, x0)
    reference = load_triplet(args.reference) if args.reference else None
    trace = rqi.solve(
        pair, t0, tol_abs=args.tol_abs, max_iter=args.max_iter, reference=reference
    )
    records = []
    for rec in trace.iterates:
        row = {
            "k": rec.k,
            "mu": rec.triplet.mu,
            "lambda": rec.triplet.lam,
            "res_norm": rec.res_norm,
        }
        d = rec.diagnostics
        row.update(
            {
                "sigma_n_jhat": d.sigma_n_jhat if d else None,
                "c1": d.c1 if d else None,
                "c2": d.c2 if d else None,
                "abs_a12": d.abs_a12 if d else None,
                "branch": d.branch.value if d else None,
            }
        )
        if reference is not None:
            row.update({"err_mu": rec.err_mu, "err_lambda": rec.err_lambda, "err_x": rec.err_x})
        records.append(row)
    doc = {"status": trace.status.value, "iterates": records}
    if args.format == "csv":
        _emit_csv(records, args.out)
    else:
        _emit(doc, args.out)
    return 0


def _emit_csv(records, path):
    import csv as _csv
    import io

    buf = io.StringIO()
    if records:
        writer = _csv.DictWriter(buf, fieldnames=list(records[0].keys()))
        writer.writeheader()
        writer.writerows(records)
    text = buf.getvalue()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args):
    pair = load_pair(args.pair)
    c = run_classify(pair, args.mu, getattr(args, "lambda"))
    doc = {
        "kind": c.kind.value,
        "multiplicity": c.multiplicity,
        "lambda_double_prime": None if np.isnan(c.lambda_double_prime) else c.lambda_double_prime,
        "cluster_c_eigs": [float(e) for e in c.cluster_c_eigs],
        "sigma_min_j": None if np.isnan(c.sigma_min_j) else c.sigma_min_j,
    }
    _emit(doc, args.out)
    return 0


def cmd_curves(args):
    pair = load_pair(args.pair)
    grid = curves_mod.trace_curves(pair, args.mu_lo, args.mu_hi, args.grid)
    if args.format == "csv":
        curves_mod.export_grid_csv(grid, args.out, with_vectors=args.vectors)
    else:
        doc = {
            "matched": grid.matched,
            "min_overlap": grid.min_overlap,
            "points": [
                {"mu": p.mu, "values": [float(v) for v in p.values]} for p in grid.points
            ],
        }
        _emit(doc, args.out)
    return 0


def cmd_oracle(args):
    pair = load_pair(args.pair)
    hits, suspects = oracle.scan(pair, args.mu_lo, args.mu_hi, args.grid)
    doc = {
        "hits": [
            {
                "kind": h.kind.value,
                "curves": list(h.curves),
                "mu": h.triplet.mu,
                "lambda": h.triplet.lam,
                "x": [[float(z.real), float(z.imag)] for z in h.triplet.x],
                "bracket": list(h.bracket),
                "refined_to": h.refined_to,
                "residual": residual(pair, h.triplet).norm,
            }
            for h in hits
        ],
        "suspects": [{"mu": mu, "curves": c if isinstance(c, int) else list(c)} for mu, c in suspects],
    }
    _emit(doc, args.out)
    return 0


def _target_from_args(args, pair):
    c = run_classify(pair, args.target_mu, args.target_lambda)
    regime = "simple" if c.kind is Kind.NONSINGULAR_SIMPLE else "multiple"
    s = eigvec_set(pair, args.target_mu, args.target_lambda)
    t = Triplet(args.target_mu, args.target_lambda, s.representative())
    return harness.Target(pair=pair, triplet=t, regime=regime, vec_set=s)


def _window_verdicts(slopes, windows):
    verdicts = []
    for key, (lo, hi) in windows.items():
        val = slopes.get(key)
        verdicts.append(
            {"check": "slope_%s" % key, "value": val, "window": [lo, hi], "pass": lo <= val <= hi}
        )
    return verdicts


def cmd_study(args):
    pair = load_pair(args.pair)
    target = _target_from_args(args, pair)
    eps_list = [float(e) for e in args.eps]
    if args.kind == "scaling":
        study = harness.scaling_study(target, eps_list, args.trials, args.seed)
        windows = SIMPLE_WINDOWS if target.regime == "simple" else MULTIPLE_WINDOWS
        verdicts = _window_verdicts(study.fitted_slopes, windows)
        doc = study.to_dict()
    elif args.kind == "ritz":
        study = harness.ritz_approx_study(target, eps_list, args.trials, args.seed)
        verdicts = _window_verdicts(study.fitted_slopes, RITZ_WINDOWS)
        doc = study.to_dict()
    else:
        report = harness.conditioning_study(target, eps_list, args.trials, args.seed)
        verdicts = []
        for eps, sv, cv in zip(report.epsilons, report.sigma_violations, report.c_violations):
            expected_clean = eps <= 1e-3
            verdicts.append(
                {
                    "check": "conditioning_eps_%g" % eps,
                    "sigma_violations": sv,
                    "c_violations": cv,
                    "pass": (sv == 0 and cv == 0) if expected_clean else True,
                }
            )
        doc = report.to_dict()
    doc["seed"] = args.seed
    doc["regime"] = target.regime
    doc["verdicts"] = verdicts
    _emit(doc, args.out)
    return 0 if all(v["pass"] for v in verdicts) else 1


def cmd_gen_pair(args):
    if args.crossing:
        mu_star, lam_star = args.crossing
        pair = harness.random_pair_with_crossing(
            args.n, (args.sig_pos, args.sig_neg), mu_star, lam_star, args.seed
        )
    else:
        pair = harness.random_pair(args.n, (args.sig_pos, args.sig_neg), args.seed)
    save_pair(pair, args.out)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="twodevp")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the 2D Rayleigh quotient iteration")
    ps.add_argument("--pair", required=True)
    ps.add_argument("--mu0", type=float, required=True)
    ps.add_argument("--lambda0", type=float, required=True)
    g = ps.add_mutually_exclusive_group()
    g.add_argument("--x0", help="triplet file providing the starting vector")
    g.add_argument("--x0-auto", action="store_true", help="start from the nearest eigenvector (default)")
    ps.add_argument("--tol-abs", type=float, default=None)
    ps.add_argument("--max-iter", type=int, default=None)
    ps.add_argument("--reference", help="triplet file with the known solution")
    ps.add_argument("--out")
    ps.add_argument("--format", choices=["json", "csv"], default="json")
    ps.set_defaults(func=cmd_solve)

    pc = sub.add_parser("classify", help="classify a candidate 2D-eigenvalue")
    pc.add_argument("--pair", required=True)
    pc.add_argument("--mu", type=float, required=True)
    pc.add_argument("--lambda", type=float, required=True)
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_classify)

    pv = sub.add_parser("curves", help="trace matched eigencurves")
    pv.add_argument("--pair", required=True)
    pv.add_argument("--mu-lo", type=float, required=True)
    pv.add_argument("--mu-hi", type=float, required=True)
    pv.add_argument("--grid", type=int, default=64)
    pv.add_argument("--vectors", action="store_true")
    pv.add_argument("--out")
    pv.add_argument("--format", choices=["json", "csv"], default="json")
    pv.set_defaults(func=cmd_curves)

    po = sub.add_parser("oracle", help="scan for 2D-eigenvalues by brute force")
    po.add_argument("--pair", required=True)
    po.add_argument("--mu-lo", type=float, required=True)
    po.add_argument("--mu-hi", type=float, required=True)
    po.add_argument("--grid", type=int, default=64)
    po.add_argument("--out")
    po.set_defaults(func=cmd_oracle)

    pt = sub.add_parser("study", help="perturbation studies around a known solution")
    pt.add_argument("kind", choices=["scaling", "ritz", "conditioning"])
    pt.add_argument("--pair", required=True)
    pt.add_argument("--target-mu", type=float, required=True)
    pt.add_argument("--target-lambda", type=float, required=True)
    pt.add_argument("--eps", nargs="+", required=True)
    pt.add_argument("--trials", type=int, default=50)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--out")
    pt.set_defaults(func=cmd_study)

    pg = sub.add_parser("gen-pair", help="generate a seeded random pair")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--sig-pos", type=int, required=True)
    pg.add_argument("--sig-neg", type=int, required=True)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--crossing", nargs=2, type=float, metavar=("MU", "LAMBDA"))
    pg.add_argument("--out", required=True)
    pg.set_defaults(func=cmd_gen_pair)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TwoDevpError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())

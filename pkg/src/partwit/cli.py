"""Command-line frontend: reproducible runs with JSON/CSV outputs.

Exit codes: 0 success, 1 verification failure, 2 usage/config errors.
Every output embeds the full flag set and the report schema version.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import sampling, seplab, tensorops, verify
from .immanants import fuzz_report
from .partitions import enumerate_partitions
from .witness import (
    Witness,
    alpha_semisep,
    alpha_semisep_closed,
    alpha_semisep_numeric,
    separability_partition,
)

SCHEMA = "pw/1"


def _parse_kappa(text: str):
    try:
        return separability_partition(int(k) for k in text.replace(",", "|").split("|"))
    except ValueError as exc:
        raise SystemExit(f"error: bad separability partition {text!r}: {exc}")


def _load_witness(path: str) -> Witness:
    if not os.path.exists(path):
        print(f"error: witness file not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    try:
        return Witness.load(path)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad witness file {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _state_from_spec(spec: str, w: Witness, cache_dir: str) -> np.ndarray:
    """Build a density matrix from a state spec string.

    Supported: ``q:w1,w2,...`` (projector weights, canonical order),
    ``werner:p`` (the tripartite one-parameter family), and ``semisep-min``
    (the optimal one-site-split product state of the witness itself).
    """
    kind, _, arg = spec.partition(":")
    if kind == "q":
        weights = np.array([float(x) for x in arg.split(",")])
        return seplab.symmetric_state(weights, w.d, w.n, cache_dir=cache_dir)
    if kind == "werner":
        p = float(arg)
        if w.n != 3:
            raise SystemExit("error: the werner family lives on n=3 sites")
        basis = enumerate_partitions(3, w.d)
        weights = np.zeros(len(basis))
        weights[basis.index((3,))] = p
        weights[basis.index((2, 1))] = 1.0 - p
        return seplab.symmetric_state(weights, w.d, 3, cache_dir=cache_dir)
    if kind == "semisep-min":
        res = alpha_semisep_numeric(w)
        if "factors" not in res.certificate:
            raise SystemExit("error: no eigenvector certificate at this size")
        state = np.array([1.0 + 0j])
        for factor in res.certificate["factors"]:
            state = np.kron(state, factor)
        return np.outer(state, state.conj())
    raise SystemExit(f"error: unknown state spec {spec!r}")


def _emit(payload: dict, args) -> None:
    payload = {"schema": SCHEMA, "command": args.command,
               "flags": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
               **payload}
    if args.format == "csv":
        rows = payload.pop("rows", None)
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        else:
            writer = csv.writer(buf)
            for key, value in payload.items():
                writer.writerow([key, json.dumps(value)])
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return str(obj)


def cmd_gen_projectors(args) -> int:
    ps = tensorops.all_projectors(args.dim, args.sites, cache_dir=args.cache_dir,
                                  policy="refresh" if args.refresh else "use")
    path = tensorops.cache_path(args.cache_dir, args.dim, args.sites)
    supported = len(ps.supported)
    _emit({
        "path": path,
        "projectors": supported,
        "zero_blocks": len(ps.partitions) - supported,
        "traces": {str(lam): t for lam, t in ps.traces().items()},
    }, args)
    return 0


def cmd_alpha(args) -> int:
    w = _load_witness(args.witness)
    kappa = _parse_kappa(args.kappa)
    method = args.method
    if method == "auto":
        method = "closed" if kappa == (w.n - 1, 1) else "seesaw"
    if method in ("closed", "numeric") and kappa != (w.n - 1, 1):
        print(f"error: method {method!r} covers kappa=[n-1|1] only", file=sys.stderr)
        return 2
    if method == "closed":
        res = alpha_semisep_closed(w)
    elif method == "numeric":
        res = alpha_semisep_numeric(w)
    elif method == "both":
        res = alpha_semisep(w)
    else:
        res = seplab.seesaw_minimize(w, kappa, restarts=args.restarts, seed=args.seed,
                                     cache_dir=args.cache_dir, threads=args.threads)
    _emit({"kappa": "|".join(map(str, kappa)), "alpha": res.to_json()}, args)
    return 0


def cmd_detect(args) -> int:
    from .witness import detect_inseparability

    w = _load_witness(args.witness)
    p = np.array([float(x) for x in args.probabilities.split(",")])
    if args.alpha is not None:
        alpha, provenance = args.alpha, "flag"
    else:
        kappa = _parse_kappa(args.kappa)
        alpha, provenance = sampling.alpha_for_structure(
            w, kappa, seed=args.seed, restarts=args.restarts, cache_dir=args.cache_dir)
    value, detected = detect_inseparability(p, w, alpha)
    _emit({"value": value, "detected": detected, "alpha": alpha,
           "alpha_provenance": provenance}, args)
    return 0


def cmd_sample(args) -> int:
    w = _load_witness(args.witness)
    kappa = _parse_kappa(args.kappa)
    rho = _state_from_spec(args.state, w, args.cache_dir)
    report = sampling.pipeline(rho, w, kappa, total=args.shots, delta=args.delta,
                               seed=args.seed, cache_dir=args.cache_dir,
                               restarts=args.restarts)
    _emit(report.to_json(witness=w, kappa=kappa), args)
    return 0


def cmd_seesaw(args) -> int:
    w = _load_witness(args.witness)
    kappa = _parse_kappa(args.kappa)
    res = seplab.seesaw_minimize(w, kappa, restarts=args.restarts, seed=args.seed,
                                 cache_dir=args.cache_dir, threads=args.threads)
    _emit({"kappa": "|".join(map(str, kappa)), "alpha": res.to_json()}, args)
    return 0


def cmd_verify(args) -> int:
    names = verify.ALL_ORDER if "all" in args.suites else args.suites
    results = verify.run_suites(names, seed=args.seed, cache_dir=args.cache_dir,
                                threads=args.threads)
    for res in results:
        print(res.line(), file=sys.stderr)
    payload = {
        "passed": all(r.passed for r in results),
        "checks": [
            {"criterion": r.criterion, "name": r.name, "passed": r.passed,
             "elapsed": r.elapsed, "notes": r.notes, "details": r.details}
            for r in results
        ],
    }
    _emit(payload, args)
    return 0 if payload["passed"] else 1


def cmd_classify_werner(args) -> int:
    report = seplab.classify_werner_family(resolution=args.resolution, d=args.dim,
                                           cache_dir=args.cache_dir)
    if args.format == "csv":
        report["rows"] = report.pop("sweep")
    _emit(report, args)
    return 0


def cmd_immanant_test(args) -> int:
    sizes = tuple(int(s) for s in args.sizes.split(","))
    report = fuzz_report(sizes=sizes, samples=args.samples, seed=args.seed)
    if args.format == "csv":
        report["rows"] = [
            {"inequality": name, "n": name.split("n=")[1][0] if "n=" in name else "",
             "seed": args.seed, "min_margin": slot["min_margin"],
             "violations": slot["violations"]}
            for name, slot in report.pop("per_inequality").items()
        ]
    _emit(report, args)
    return 0 if report["violations"] == 0 else 1


def cmd_polytope(args) -> int:
    projectors = tensorops.all_projectors(4, 4, cache_dir=args.cache_dir)
    tables = seplab.verify_polytope_tables(projectors=projectors)
    search = seplab.extreme_point_search(seed=args.seed, trials=args.trials,
                                         projectors=projectors)
    ok = tables["passed"] and search["n_clusters"] == 7
    _emit({"tables": {k: v for k, v in tables.items() if k != "vertex_min_eigs"},
           "search": search, "passed": ok}, args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partwit",
        description="Symmetric entanglement witnesses from partition-label measurements",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default="./cache", help="projector cache directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-projectors", parents=[common],
                       help="build and cache the Young projectors for (d, n)")
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("-n", "--sites", type=int, required=True)
    p.add_argument("--refresh", action="store_true", help="force recompute")
    p.set_defaults(func=cmd_gen_projectors)

    p = sub.add_parser("alpha", parents=[common],
                       help="minimum expectation value over a separability structure")
    p.add_argument("--witness", required=True)
    p.add_argument("--kappa", required=True, help='structure, e.g. "3|1"')
    p.add_argument("--method", choices=("closed", "numeric", "both", "seesaw", "auto"),
                   default="auto")
    p.add_argument("--restarts", type=int, default=50)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("detect", parents=[common],
                       help="apply the detection rule to an outcome distribution")
    p.add_argument("--witness", required=True)
    p.add_argument("--probabilities", "--p", dest="probabilities", required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--kappa", default="auto")
    p.add_argument("--restarts", type=int, default=50)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sample", parents=[common],
                       help="simulate the full measurement pipeline")
    p.add_argument("--state", required=True,
                   help='state spec: "q:...", "werner:p", or "semisep-min"')
    p.add_argument("--witness", required=True)
    p.add_argument("--kappa", required=True)
    p.add_argument("--shots", "-N", type=int, default=100_000)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--restarts", type=int, default=50)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("seesaw", parents=[common],
                       help="seesaw upper bound on the minimum expectation value")
    p.add_argument("--witness", required=True)
    p.add_argument("--kappa", required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.set_defaults(func=cmd_seesaw)

    p = sub.add_parser("verify", parents=[common],
                       help="run acceptance suites; exit 0 iff all pass")
    p.add_argument("suites", nargs="+",
                   help=f"suite names from {sorted(verify.SUITES)} or 'all'")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify-werner", parents=[common],
                       help="boundaries of the tripartite one-parameter family")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--resolution", type=int, default=201)
    p.set_defaults(func=cmd_classify_werner)

    p = sub.add_parser("immanant-test", parents=[common],
                       help="randomized immanant-inequality sweep")
    p.add_argument("--sizes", default="3,4")
    p.add_argument("--samples", type=int, default=1_000)
    p.set_defaults(func=cmd_immanant_test)

    p = sub.add_parser("polytope", parents=[common],
                       help="verify the FPPT polytope tables and vertex search")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_polytope)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise
    except (ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

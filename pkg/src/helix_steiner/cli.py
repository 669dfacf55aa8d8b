"""``srf`` command line: eval, scan, certify, tree, ratio.

Exit codes: 0 ok, 1 bad arguments, 2 undefined/infeasible parameters,
3 I/O failure, 4 certification failure, 5 optimiser non-convergence.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import math
import sys

from . import extremum, trees
from .errors import ConvergenceError, InfeasibleConfiguration, UndefinedSRF
from .helix import HelixParams, full_tree_feasible
from .srf import graham_hwang_window, srf

log = logging.getLogger("helix_steiner")

EXIT_OK, EXIT_USAGE, EXIT_UNDEFINED, EXIT_IO, EXIT_CERT, EXIT_NOCONV = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _dump(payload, out):
    text = json.dumps(_clean(payload), indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


def _params(args) -> HelixParams:
    try:
        return HelixParams(args.omega, args.a)
    except ValueError as exc:
        raise UsageError(str(exc))


def _grid(args) -> extremum.GridSpec:
    spec = extremum.GridSpec(
        args.omega_min, args.omega_max, args.n_omega, args.a_min, args.a_max, args.n_a
    )
    try:
        spec.validate()
    except ValueError as exc:
        raise UsageError(str(exc))
    return spec


def cmd_eval(args) -> int:
    params = _params(args)
    try:
        s = srf(params)
    except UndefinedSRF:
        log.error("undefined SRF: A1 <= 0 at omega=%r", params.omega)
        return EXIT_UNDEFINED
    record = {
        "omega": params.omega,
        "a": params.a,
        "rho": s.rho,
        "m_star": s.m_star,
        "densities": [
            {"m": d.m, "spanning": d.spanning, "steiner": d.steiner}
            for d in s.densities[: s.m_star + 2]
        ],
        "feasible_m1": full_tree_feasible(1, params),
    }
    _dump(record, None)
    return EXIT_OK


def write_scan_csv(res: extremum.ScanResult, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["omega", "a", "m_star", "rho", "in_domain"])
    for i, om in enumerate(res.omega):
        for j, a in enumerate(res.a):
            w.writerow([
                format(float(om), ".17g"), format(float(a), ".17g"), int(res.m_star[i, j]),
                format(float(res.rho[i, j]), ".17g"), int(res.in_domain[i, j]),
            ])


def cmd_scan(args) -> int:
    spec = _grid(args)
    res = extremum.scan(spec, threads=args.threads)
    try:
        with (open(args.out, "w", encoding="utf-8", newline="")
              if args.out not in (None, "-") else contextlib.nullcontext(sys.stdout)) as fh:
            if args.format == "csv":
                write_scan_csv(res, fh)
            else:
                rows = [
                    {"omega": float(om), "a": float(a), "m_star": int(res.m_star[i, j]),
                     "rho": float(res.rho[i, j]), "in_domain": bool(res.in_domain[i, j])}
                    for i, om in enumerate(res.omega) for j, a in enumerate(res.a)
                ]
                json.dump(_clean(rows), fh)
                fh.write("\n")
    except OSError as exc:
        log.error("cannot write scan output: %s", exc)
        return EXIT_IO
    om, a, rho = res.minimum
    log.info("minimum rho=%.17g at omega=%.17g a=%.17g cell=%s (%d in-domain nodes)",
             rho, om, a, list(res.argmin), int(res.in_domain.sum()))
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = _grid(args)
    res = extremum.scan(spec, threads=args.threads)
    if args.corrupt_sample:
        i, j = (int(v) for v in args.corrupt_sample.split(","))
        res.rho[i, j] = 0.5
        res.in_domain[i, j] = True
    cert, _, _ = extremum.certify(tol=args.tol, rho_tol=args.rho_tol, scan_res=res)
    try:
        _dump(cert.to_dict(), args.out)
    except OSError as exc:
        log.error("cannot write certificate: %s", exc)
        return EXIT_IO
    if not cert.passed:
        log.error("certification failed: %d violation(s)", len(cert.violations))
        for v in cert.violations[:20]:
            log.error("  %s", v)
        return EXIT_CERT
    log.info("certificate passed: refined rho=%.17g, boundary margin=%.6g",
             cert.refined["rho"], cert.boundary_margin)
    return EXIT_OK


def tree_record(tree: trees.SausageTree, params: HelixParams) -> dict:
    check = trees.check_angles(tree)
    return {
        "n": tree.n,
        "omega": params.omega,
        "a": params.a,
        "terminals": tree.terminals.tolist(),
        "steiner": tree.steiner.tolist(),
        "edges": [list(e) for e in tree.topology.edges],
        "total_length": tree.total_length,
        "angles": check.angles.tolist(),
        "degenerate": [int(i + 1) for i in (check.degenerate.nonzero()[0])],
        "converged": bool(tree.converged) if tree.converged is not None else None,
        "iterations": tree.iterations,
    }


def _check_n(n):
    if n < 3:
        raise UsageError(f"--n must be >= 3, got {n}")


def cmd_tree(args) -> int:
    _check_n(args.n)
    params = _params(args)
    try:
        tree = trees.build_sausage(args.n, params, args.seed)
    except InfeasibleConfiguration as exc:
        log.error("%s", exc)
        return EXIT_UNDEFINED
    code = EXIT_OK
    if args.optimize:
        try:
            tree = trees.optimize_steiner(tree, tol=args.tol, max_iter=args.max_iter)
        except ConvergenceError as exc:
            log.error("%s", exc)
            tree, code = exc.result, EXIT_NOCONV
    record = tree_record(tree, params)
    if args.with_ratio:
        record["finite_ratio"] = tree.total_length / trees.mst_length(tree.terminals)
    try:
        _dump(record, args.out)
    except OSError as exc:
        log.error("cannot write tree: %s", exc)
        return EXIT_IO
    return code


def cmd_ratio(args) -> int:
    _check_n(args.n)
    params = _params(args)
    try:
        limit = srf(params).rho
        ratio = trees.finite_ratio(args.n, params, tol=args.tol, max_iter=args.max_iter)
    except (UndefinedSRF, InfeasibleConfiguration) as exc:
        log.error("%s", exc)
        return EXIT_UNDEFINED
    except ConvergenceError as exc:
        log.error("%s", exc)
        return EXIT_NOCONV
    _dump({"n": args.n, "finite_ratio": ratio, "srf_limit": limit, "gap": abs(ratio - limit)}, None)
    return EXIT_OK


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    lo, hi = graham_hwang_window()
    parser = _Parser(prog="srf", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of flag values; explicit flags win")
    parser.add_argument("--log-level", default="INFO", type=str.upper,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def point(p):
        p.add_argument("--omega", type=float, required=True)
        p.add_argument("--a", type=float, required=True)

    def grid(p):
        p.add_argument("--omega-min", type=float, default=lo)
        p.add_argument("--omega-max", type=float, default=hi)
        p.add_argument("--n-omega", type=int, default=400)
        p.add_argument("--a-min", type=float, default=0.0)
        p.add_argument("--a-max", type=float, default=1.5)
        p.add_argument("--n-a", type=int, default=400)
        p.add_argument("--threads", type=int, default=None)

    def optimiser(p):
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--max-iter", type=int, default=100_000)

    subs = {}
    p = subs["eval"] = sub.add_parser("eval", help="evaluate the ratio at one point")
    point(p)
    p.set_defaults(func=cmd_eval)

    p = subs["scan"] = sub.add_parser("scan", help="grid scan to CSV")
    grid(p)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = subs["certify"] = sub.add_parser("certify", help="scan, refine and certify the minimum")
    grid(p)
    p.add_argument("--tol", type=float, default=1e-12, help="Newton residual tolerance")
    p.add_argument("--rho-tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.add_argument("--corrupt-sample", default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_certify)

    p = subs["tree"] = sub.add_parser("tree", help="build (and optimise) the 3-sausage")
    p.add_argument("--n", type=int, required=True)
    point(p)
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--seed", choices=("analytic", "collapsed"), default="analytic")
    p.add_argument("--with-ratio", action="store_true")
    p.add_argument("--out", default=None)
    optimiser(p)
    p.set_defaults(func=cmd_tree)

    p = subs["ratio"] = sub.add_parser("ratio", help="finite-n Steiner/MST ratio")
    p.add_argument("--n", type=int, required=True)
    point(p)
    optimiser(p)
    p.set_defaults(func=cmd_ratio)
    return parser, subs


def _setup_logging(level):
    # stdout carries only payloads
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(level.upper())
    log.propagate = False


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        args = _parse(parser, subs, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"srf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    _setup_logging(args.log_level)
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


def _parse(parser, subs, argv):
    # a config file supplies defaults for the chosen subcommand
    probe = _Parser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        cfg = _load_config(known.config)
        command = next((a for a in argv if a in subs), None)
        if command is not None:
            for action in subs[command]._actions:
                if action.dest in cfg:
                    action.required = False
            subs[command].set_defaults(**cfg)
    return parser.parse_args(argv)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Note on flags: ``-h`` is a construction parameter (the coset count of the
univariate family), so automatic help is disabled and ``--help`` is bound
explicitly.

Exit codes: 0 success / all methods agree, 2 method disagreement or failed
consistency check, 3 parameter error, 4 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .code import build_code, min_distance, weight_distribution
from .defsets import DefiningSet, class1_build, class2_build, class3_variant_build
from .errors import BudgetExceededError, FormulaUnavailableError, GhwlabError, ParameterError
from .hierarchy import (
    DEFAULT_TEST_BUDGET,
    dual_oracle_cost,
    support_oracle_cost,
    verify_hierarchy,
)
from .linalg import gaussian_binomial

EXIT_OK = 0
EXIT_DISAGREE = 2
EXIT_PARAMS = 3
EXIT_BUDGET = 4

PATTERN_CODES = {"01": (0, 1), "10": (1, 0), "00": (0, 0), "11": (1, 1)}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--help", action="help", help="show this help message and exit")
    p.add_argument("--class", dest="klass", choices=("1", "2", "3"), required=True,
                   help="defining-set family")
    p.add_argument("-q", type=int, default=2, help="prime field characteristic")
    p.add_argument("-m", type=int, required=True, help="primary extension degree")
    p.add_argument("-k", type=int, help="subfield degree (class 1) or second extension degree (class 2)")
    p.add_argument("-s", type=int, help="excluded subfield degree on the first factor (class 2)")
    p.add_argument("-l", type=int, help="excluded subfield degree on the second factor (class 2)")
    p.add_argument("-h", type=int, default=0, help="number of nonzero cosets removed (class 1)")
    p.add_argument("--thetas", help="comma-separated coset representatives (digit strings)")
    p.add_argument("--pattern", choices=sorted(PATTERN_CODES), default="01",
                   help="trace pattern selecting the class-3 variant")


def _add_run_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--methods", default="support,dual,formula",
                   help="comma-separated subset of support,dual,formula")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: GHWLAB_THREADS or 1)")
    p.add_argument("--budget", type=int, default=DEFAULT_TEST_BUDGET,
                   help="max subspace-element tests before refusing")
    p.add_argument("--force", action="store_true", help="ignore the budget guardrail")
    p.add_argument("--deterministic", action="store_true",
                   help="omit timestamps and timings for byte-stable output")
    p.add_argument("--out", help="write the report to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghwlab", add_help=False,
        description="defining-set codes and their generalized Hamming weights",
    )
    parser.add_argument("--help", action="help")
    sub = parser.add_subparsers(dest="command", required=True)

    p_defset = sub.add_parser("defset", add_help=False,
                              help="construct and print a defining set")
    _add_common(p_defset)
    p_defset.add_argument("--out", help="write JSON to a file")

    p_code = sub.add_parser("code", add_help=False,
                            help="build the code; print parameters and weight data")
    _add_common(p_code)
    p_code.add_argument("--format", choices=("table", "json"), default="table")
    p_code.add_argument("--budget", type=int, default=2**24)
    p_code.add_argument("--force", action="store_true")
    p_code.add_argument("--out")

    p_ghw = sub.add_parser("ghw", add_help=False,
                           help="hierarchy by a single method")
    _add_common(p_ghw)
    _add_run_opts(p_ghw)
    p_ghw.set_defaults(methods="formula")

    p_verify = sub.add_parser("verify", add_help=False,
                              help="run all requested methods and cross-check")
    _add_common(p_verify)
    _add_run_opts(p_verify)

    p_sweep = sub.add_parser("sweep", add_help=False,
                             help="verify every in-budget parameter set up to a ceiling")
    p_sweep.add_argument("--help", action="help")
    p_sweep.add_argument("--max-q", type=int, default=3)
    p_sweep.add_argument("--max-ambient", type=int, default=8,
                         help="ceiling on the message-space dimension")
    p_sweep.add_argument("--methods", default="dual,formula")
    p_sweep.add_argument("--format", choices=("table", "json"), default="json")
    p_sweep.add_argument("--threads", type=int, default=None)
    p_sweep.add_argument("--budget", type=int, default=DEFAULT_TEST_BUDGET)
    p_sweep.add_argument("--deterministic", action="store_true")
    p_sweep.add_argument("--out")
    return parser


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get("GHWLAB_THREADS")
    return max(1, int(env)) if env else 1


def _build_defset(args) -> DefiningSet:
    if args.klass == "1":
        if args.k is None:
            raise ParameterError("class 1 requires -k")
        thetas = args.thetas.split(",") if args.thetas else None
        return class1_build(args.q, args.m, args.k, args.h, thetas=thetas)
    if args.klass == "2":
        if args.k is None or args.s is None or args.l is None:
            raise ParameterError("class 2 requires -k, -s and -l")
        return class2_build(args.q, args.m, args.s, args.k, args.l)
    if args.q != 2:
        raise ParameterError("class 3 is defined over characteristic 2")
    return class3_variant_build(args.m, PATTERN_CODES[args.pattern])


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _parse_methods(text: str) -> tuple[str, ...]:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    for m in methods:
        if m not in ("support", "dual", "formula"):
            raise ParameterError(f"unknown method {m!r}")
    if not methods:
        raise ParameterError("empty method list")
    return methods


def _estimate_line(dset: DefiningSet, methods) -> str:
    code = build_code(dset)
    ranks = range(1, code.code_dim + 1)
    parts = []
    if "dual" in methods:
        n_amb, q = dset.ambient_dim, dset.q
        count = sum(gaussian_binomial(n_amb, r, q) for r in ranks)
        parts.append(f"dual: {count} subspaces x {len(dset)} elements = {dual_oracle_cost(dset, ranks)}")
    if "support" in methods:
        count = sum(gaussian_binomial(code.message_dim, r, code.q) for r in ranks)
        parts.append(f"support: {count} subspaces x {code.length} coords = {support_oracle_cost(code, ranks)}")
    return "estimated work -> " + "; ".join(parts) if parts else "estimated work -> formula only"


def _cmd_defset(args) -> int:
    dset = _build_defset(args)
    _emit(json.dumps(dset.to_json_dict(), indent=2, sort_keys=True), args.out)
    return EXIT_OK


def _cmd_code(args) -> int:
    dset = _build_defset(args)
    code = build_code(dset)
    try:
        dist = weight_distribution(code, budget=None if args.force else args.budget)
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    d = min(w for w in dist if w > 0)
    payload = {
        "class": dset.kind,
        "params": dset.to_json_dict()["params"],
        "q": dset.q,
        "n": code.length,
        "dim": code.code_dim,
        "message_dim": code.message_dim,
        "kernel_dim": code.kernel.dim,
        "min_distance": d,
        "weight_distribution": {str(w): c for w, c in dist.items()},
    }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        lines = [
            f"[{code.length}, {code.code_dim}, {d}] code over F_{dset.q}",
            f"message dim {code.message_dim}, kernel dim {code.kernel.dim}",
            "weights: " + " ".join(f"{w}:{c}" for w, c in dist.items()),
        ]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _run_verify(args, quiet_estimate: bool = False) -> int:
    methods = _parse_methods(args.methods)
    dset = _build_defset(args)
    if not quiet_estimate and ("dual" in methods or "support" in methods):
        print(_estimate_line(dset, methods), file=sys.stderr)
    try:
        report = verify_hierarchy(
            dset,
            methods=methods,
            workers=_threads(args),
            budget=args.budget,
            force=args.force,
        )
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FormulaUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    if args.format == "json":
        _emit(report.to_json(deterministic=args.deterministic), args.out)
    elif args.format == "csv":
        _emit(report.to_csv(), args.out)
    else:
        _emit(report.to_table(), args.out)
    return EXIT_OK if report.ok else EXIT_DISAGREE


def sweep_parameter_sets(max_q: int, max_ambient: int):
    """Deterministic (label, builder-args) list for the default sweep."""
    primes = [p for p in (2, 3, 5, 7) if p <= max_q]
    items = []
    for q in primes:
        for m in range(2, max_ambient + 1):
            for k in range(1, m):
                if m % k:
                    continue
                for h in range(0, q):
                    if (h + 1) * q**k >= q**m:
                        continue  # removed cosets would cover the field
                    items.append(("class1", {"q": q, "m": m, "k": k, "h": h}))
    for q in primes:
        for m in range(2, max_ambient):
            for k in range(2, max_ambient - m + 1):
                for s in range(1, m):
                    if m % s:
                        continue
                    for l in range(1, k):
                        if k % l or k - l > m - s:
                            continue
                        items.append(
                            ("class2", {"q": q, "m": m, "s": s, "k": k, "l": l})
                        )
    for m in range(2, max_ambient // 2 + 1):
        items.append(("class3", {"m": m}))
    return items


def _cmd_sweep(args) -> int:
    methods = _parse_methods(args.methods)
    workers = _threads(args)
    results = []
    worst = EXIT_OK
    for kind, params in sweep_parameter_sets(args.max_q, args.max_ambient):
        if kind == "class1":
            dset = class1_build(params["q"], params["m"], params["k"], params["h"])
        elif kind == "class2":
            dset = class2_build(params["q"], params["m"], params["s"], params["k"], params["l"])
        else:
            dset = class3_variant_build(params["m"])
        run_methods = methods
        if not dset.formula_available and tuple(run_methods) == ("dual", "formula"):
            run_methods = ("support", "dual")
        try:
            report = verify_hierarchy(
                dset, methods=run_methods, workers=workers,
                budget=args.budget, force=False,
            )
        except BudgetExceededError as exc:
            results.append(
                {"class": kind, "params": params, "skipped": "budget",
                 "required": exc.required}
            )
            continue
        entry = report.to_dict(deterministic=args.deterministic)
        results.append(entry)
        if not report.ok:
            worst = EXIT_DISAGREE
    payload = {
        "max_q": args.max_q,
        "max_ambient": args.max_ambient,
        "methods": list(methods),
        "results": results,
    }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        lines = []
        for entry in results:
            if "skipped" in entry:
                lines.append(
                    f"{entry['class']} {entry['params']} skipped (needs {entry['required']})"
                )
            else:
                hierarchy = [
                    next(v for k, v in row.items() if k.startswith("d_"))
                    for row in entry["rows"]
                ]
                status = "ok" if entry["ok"] else "FAILED"
                lines.append(f"{entry['class']} {entry['params']} {hierarchy} {status}")
        _emit("\n".join(lines), args.out)
    return worst


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAMS if exc.code not in (0, None) else 0
    try:
        if args.command == "defset":
            return _cmd_defset(args)
        if args.command == "code":
            return _cmd_code(args)
        if args.command in ("ghw", "verify"):
            return _run_verify(args, quiet_estimate=args.deterministic)
        if args.command == "sweep":
            return _cmd_sweep(args)
    except (ParameterError, GhwlabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``toastlab <command> ...``.

Exit codes: 0 verified, 2 verification failure, 3 generation failure,
64 usage error, 66 missing or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from pathlib import Path

from . import io
from .errors import (
    BudgetExceeded,
    GenerationFailed,
    InvalidParameter,
    ToastLabError,
)
from .folner import folner_sets, verify_folner, verify_iso_family
from .graph_core import TORUS, WINDOW, build_grid
from .levels import build_toast, centered_box, verify_level_sets
from .matching import perfect_matching, verify_matching
from .oracles import ParityOracle, kappa_search, oracle_matching
from .orientation import balanced_orientation, verify_balanced
from .orientation import to_dot as orientation_dot
from .report import Report
from .toast import verify_toast
from .tree import build_tree, verify_tree
from .tree import to_dot as tree_dot

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_GENERATION = 3
EXIT_USAGE = 64
EXIT_NO_INPUT = 66


class UsageError(Exception):
    pass


class MissingInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}") from None
    if not dims:
        raise argparse.ArgumentTypeError("empty dims")
    return dims


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TOASTLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TOASTLAB_SEED is not an integer: {env!r}") from None


def _load(path) -> object:
    path = Path(path)
    if not path.is_file():
        raise MissingInput(f"no such file: {path}")
    try:
        return io.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise MissingInput(f"cannot read {path}: {exc}") from None


def _graph_path(args) -> Path:
    if getattr(args, "graph", None):
        return Path(args.graph)
    return Path(args.input).with_name("graph.json")


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _error_report(exc: ToastLabError) -> Report:
    R = Report()
    R.add(exc.code, False, exc.witness or {"message": str(exc)})
    R.info["error"] = str(exc)
    return R


def _finish(report: Report, out: Path | None, name: str) -> int:
    if out is not None:
        io.write_json(out / name, report.to_json())
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_FAILED


# generate -----------------------------------------------------------------


def cmd_generate(args) -> int:
    seed = _seed(args)
    G = build_grid(args.dims, args.topology)
    domain = None
    if args.inner:
        if args.topology != WINDOW:
            raise UsageError("--inner only applies to windows")
        domain = centered_box(G, args.inner)
    out = _out(args)
    try:
        L, _, T = build_toast(G, args.r, args.levels, args.scale, seed, domain=domain)
    except GenerationFailed as exc:
        io.write_json(out / "report.json", _error_report(exc).to_json())
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    toast_report = verify_toast(G, T, threads=args.threads)
    level_report = verify_level_sets(G, L)
    report = Report()
    for check in level_report.checks + toast_report.checks:
        report.checks.append(check)
    report.info = {"levels": level_report.info, "toast": toast_report.info, "seed": seed}
    # T4 is not required of a connected toast
    gate = report.passed("P1", "P2", "P3", "T1", "T2", "T3")
    if gate or args.force_emit:
        io.write_json(out / "graph.json", io.graph_to_json(G))
        io.write_json(out / "levels.json", io.levels_to_json(L))
        io.write_json(out / "toast.json", io.toast_to_json(T))
    io.write_json(out / "report.json", report.to_json())
    print(report.summary())
    return EXIT_OK if gate else EXIT_FAILED


# constructions ------------------------------------------------------------


def _load_pair(args):
    T = io.toast_from_json(_load(args.input))
    G = io.graph_from_json(_load(_graph_path(args)))
    return G, T


def cmd_tree(args) -> int:
    G, T = _load_pair(args)
    out = _out(args)
    try:
        cert = build_tree(G, T)
    except ToastLabError as exc:
        return _finish(_error_report(exc), out, "tree_report.json")
    report = verify_tree(G, T, cert)
    if report.ok or args.force_emit:
        io.write_json(out / "tree.json", io.tree_to_json(cert))
        if args.dot:
            (out / "tree.dot").write_text(tree_dot(cert))
    return _finish(report, out, "tree_report.json")


def cmd_orient(args) -> int:
    G, T = _load_pair(args)
    out = _out(args)
    try:
        O = balanced_orientation(G, T, prefer=args.method)
    except ToastLabError as exc:
        return _finish(_error_report(exc), out, "orientation_report.json")
    report = verify_balanced(G, O)
    report.info["cycles"] = len(O.cycles)
    report.info["methods"] = dict(sorted(Counter(x["method"] for x in O.log).items()))
    if report.ok or args.force_emit:
        io.write_json(out / "orientation.json", io.orientation_to_json(O))
        io.write_json(out / "cycles.json", io.cycles_to_json(O.cycles))
        if args.dot:
            (out / "orientation.dot").write_text(orientation_dot(G, O))
    return _finish(report, out, "orientation_report.json")


def cmd_match(args) -> int:
    G, T = _load_pair(args)
    out = _out(args)
    d = args.d if args.d is not None else (G.degree(0) if len(G) else 0)
    log: list = []
    try:
        M = perfect_matching(G, T, d, log=log)
    except ToastLabError as exc:
        return _finish(_error_report(exc), out, "matching_report.json")
    report = verify_matching(G, M)
    tiles = [x for x in log if x["kind"] == "tile"]
    report.info["circuits"] = sum(1 for x in log if x["kind"] == "circuit")
    report.info["deepest_chain_index"] = max((x["depth"] for x in tiles), default=0)
    if report.ok or args.force_emit:
        io.write_json(out / "matching.json", io.matching_to_json(M))
        io.write_json(out / "matching_log.json", log)
    return _finish(report, out, "matching_report.json")


# verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    kind = args.kind
    if kind == "folner":
        if args.d is None or args.n is None or args.epsilon is None:
            raise UsageError("verify folner needs --d, --n and --epsilon")
        try:
            p = folner_sets(args.d, args.n, args.thickness)
        except InvalidParameter as exc:
            raise UsageError(str(exc)) from None
        report = verify_folner(p.graph, p, args.epsilon)
        return _finish(report, _report_dir(args), "verify_report.json")
    if not args.input:
        raise UsageError(f"verify {kind} needs --in")
    data = _load(args.input)
    G = io.graph_from_json(_load(_graph_path(args)))
    if kind == "toast":
        report = verify_toast(G, io.toast_from_json(data), threads=args.threads)
    elif kind == "levels":
        report = verify_level_sets(G, io.levels_from_json(data))
    elif kind == "tree":
        toast_path = Path(args.toast) if args.toast else Path(args.input).with_name("toast.json")
        report = verify_tree(G, io.toast_from_json(_load(toast_path)), io.tree_from_json(data))
    elif kind == "orientation":
        report = verify_balanced(G, io.orientation_from_json(data))
    elif kind == "matching":
        report = verify_matching(G, io.matching_from_json(data))
    elif kind == "iso":
        report, _ = verify_iso_family(G, io.iso_family_from_json(data))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown kind {kind}")
    return _finish(report, _report_dir(args), "verify_report.json")


def _report_dir(args) -> Path | None:
    return _out(args) if args.out else None


# oracle -------------------------------------------------------------------


def cmd_oracle(args) -> int:
    if args.which == "kappa":
        if not args.window:
            raise UsageError("oracle kappa needs --window")
        try:
            K = kappa_search(args.window, args.max_set_size, args.kappa_max, budget=args.budget)
        except BudgetExceeded as exc:
            print(io.dumps({"budget_exceeded": True, "partial": io.kappa_to_json(exc.partial)}), end="")
            return EXIT_FAILED
        except InvalidParameter as exc:
            raise UsageError(str(exc)) from None
        print(io.dumps(io.kappa_to_json(K)), end="")
        return EXIT_OK
    if not args.graph:
        raise UsageError(f"oracle {args.which} needs --graph")
    G = io.graph_from_json(_load(args.graph))
    if args.which == "matching":
        res = oracle_matching(G)
        print(io.dumps({"perfect": res.perfect, "matching": io.matching_to_json(res.matching)}), end="")
        return EXIT_OK if res.perfect else EXIT_FAILED
    exists = ParityOracle(G).exists(args.P or [])
    print(io.dumps({"exists": exists}), end="")
    return EXIT_OK if exists else EXIT_FAILED


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toastlab", description="Toast constructions, certificates and verifiers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, needs_input=True):
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out", default=None if not needs_input else ".")
        sp.add_argument("--force-emit", action="store_true",
                        help="write certificates even when their verifier rejects them")

    g = sub.add_parser("generate", help="level sets -> filled levels -> toast")
    g.add_argument("--dims", type=_dims, required=True)
    g.add_argument("--topology", choices=[TORUS, WINDOW], default=TORUS)
    g.add_argument("--r", type=int, default=1)
    g.add_argument("--levels", type=int, default=2)
    g.add_argument("--scale", type=int, default=8)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--inner", type=_dims, default=None, help="centred box the toast should cover (windows)")
    common(g)
    g.set_defaults(func=cmd_generate)

    for name, func, extra in (("tree", cmd_tree, "dot"), ("orient", cmd_orient, "dot"),
                              ("match", cmd_match, None)):
        sp = sub.add_parser(name)
        sp.add_argument("--in", dest="input", required=True, help="toast.json")
        sp.add_argument("--graph", default=None, help="graph.json (default: next to the toast)")
        if extra == "dot":
            sp.add_argument("--dot", action="store_true")
        if name == "orient":
            sp.add_argument("--method", choices=["direct", "stitch"], default="direct")
        if name == "match":
            sp.add_argument("--d", type=int, default=None)
        common(sp)
        sp.set_defaults(func=func)

    v = sub.add_parser("verify")
    v.add_argument("kind", choices=["toast", "tree", "orientation", "matching", "folner", "levels", "iso"])
    v.add_argument("--in", dest="input", default=None)
    v.add_argument("--graph", default=None)
    v.add_argument("--toast", default=None, help="toast.json for tree verification")
    v.add_argument("--d", type=int, default=None)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--epsilon", type=float, default=None)
    v.add_argument("--thickness", type=int, default=2)
    common(v, needs_input=False)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle")
    o.add_argument("which", choices=["matching", "parity", "kappa"])
    o.add_argument("--graph", default=None)
    o.add_argument("--P", type=_int_list, default=None)
    o.add_argument("--window", type=_dims, default=None)
    o.add_argument("--max-set-size", type=int, default=6)
    o.add_argument("--kappa-max", type=int, default=4)
    o.add_argument("--budget", type=int, default=None)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingInput as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO_INPUT
    except InvalidParameter as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationFailed as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except ToastLabError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

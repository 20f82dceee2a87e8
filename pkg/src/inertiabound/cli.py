"""Command-line front end.

Graph arguments are a JSON file path or the shorthands ``paley:<q>`` and
``paley:<q>-v<k>`` (P(q) with vertex k deleted and the rest relabelled
0..q-2 in order).  Exit codes: 0 success or verdict produced, 1 input error,
2 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from collections import Counter

from .certify import NonTightnessCertificate, certify_not_tight, enumerate_gadgets, verify_certificate
from .errors import BudgetExceeded
from .exactla import WeightMatrix, inertia, matrix_from_json
from .graphs import Graph, PaleyParams, delete_vertex, graph_from_json, graph_to_json, paley, triangles
from .independence import independence_number, is_alpha_critical
from .search import DEFAULT_RADIUS, grid_search_circulant, random_edge_search

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2

_PALEY_RE = re.compile(r"paley:(\d+)(?:-v(\d+))?")
_RANGE_RE = re.compile(r"(-?\d+)\.\.(-?\d+)")


class InputError(ValueError):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_graph(arg: str) -> Graph:
    m = _PALEY_RE.fullmatch(arg)
    if m:
        G = paley(int(m.group(1)))
        if m.group(2) is None:
            return G
        k = int(m.group(2))
        if k >= G.n:
            raise InputError(f"{arg}: vertex {k} out of range 0..{G.n - 1}")
        return delete_vertex(G, k).graph
    if arg.startswith("paley:"):
        raise InputError(f"{arg}: expected paley:<q> or paley:<q>-v<k>")
    try:
        return graph_from_json(_load_json(arg))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"{arg}: {exc}") from None


def parse_range(text: str) -> tuple[int, int]:
    m = _RANGE_RE.fullmatch(text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _emit(args, payload: dict, human: str) -> None:
    print(json.dumps(payload) if args.json else human)


# -- subcommands ------------------------------------------------------------

def cmd_paley(args) -> int:
    print(json.dumps(graph_to_json(paley(args.q))))
    return EXIT_OK


def cmd_alpha(args) -> int:
    res = independence_number(parse_graph(args.graph))
    _emit(args, res.to_json(), f"alpha = {res.alpha}\nwitness: {' '.join(map(str, res.witness))}")
    return EXIT_OK


def cmd_critical(args) -> int:
    rep = is_alpha_critical(parse_graph(args.graph))
    if rep.is_critical:
        lines = [f"alpha-critical (alpha = {rep.alpha}, {len(rep.per_edge)} edges)"]
        lines += [f"  {u}-{v}: {' '.join(map(str, w))}" for (u, v), w in sorted(rep.per_edge.items())]
    else:
        u, v = rep.failing_edge
        lines = [f"not alpha-critical: deleting {u}-{v} keeps alpha = {rep.alpha}"]
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK


def _load_matrix(path: str):
    try:
        return matrix_from_json(_load_json(path))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_inertia(args) -> int:
    inr = inertia(_load_matrix(args.matrix))
    _emit(args, {"inertia": list(inr)}, str(inr))
    return EXIT_OK


def cmd_bound(args) -> int:
    G = parse_graph(args.graph)
    M = _load_matrix(args.matrix)
    try:
        W = WeightMatrix.from_matrix(G, M)
    except ValueError as exc:
        raise InputError(f"{args.matrix}: {exc}") from None
    inr = inertia(W)
    alpha = independence_number(G).alpha
    _emit(args, {"bound": inr.bound, "inertia": list(inr), "alpha": alpha, "gap": inr.bound - alpha},
          f"bound = {inr.bound}  inertia {inr}  alpha = {alpha}  gap = {inr.bound - alpha}")
    return EXIT_OK


def cmd_triangles(args) -> int:
    ts = triangles(parse_graph(args.graph))
    lines = [f"{len(ts)} triangles"] + [f"  {a} {b} {c}" for a, b, c in ts]
    _emit(args, {"count": len(ts), "triangles": [list(t) for t in ts]}, "\n".join(lines))
    return EXIT_OK


def cmd_gadgets(args) -> int:
    G = parse_graph(args.graph)
    alpha = independence_number(G).alpha
    gs = enumerate_gadgets(G, alpha, threads=args.threads)
    kinds = Counter((len(g.odd_support), g.coefficient) for g in gs)
    lines = [f"{len(gs)} gadgets on {2 * alpha + 1} vertices (alpha = {alpha})"]
    lines += [f"  odd support of {k} edges, coefficient {c}: {cnt}" for (k, c), cnt in sorted(kinds.items())]
    _emit(args, {"alpha": alpha, "count": len(gs), "gadgets": [g.to_json() for g in gs]}, "\n".join(lines))
    return EXIT_OK


def cmd_certify(args) -> int:
    G = parse_graph(args.graph)
    verdict = certify_not_tight(G, threads=args.threads)
    cert = verdict.certificate
    if args.output and cert is not None:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(cert.dumps() + "\n")
    payload = {"verdict": verdict.status, "reason": verdict.reason or None,
               "gadgets": len(verdict.gadgets)}
    if cert is not None:
        payload["certificate"] = cert.to_json()
    human = str(verdict)
    if cert is not None:
        human += f"\n{len(verdict.gadgets)} gadgets, {len(cert.gadgets)} in the contradiction"
        if args.output:
            human += f"\ncertificate written to {args.output}"
    elif args.output:
        human += "\nno certificate written"
    _emit(args, payload, human)
    if verdict.reason.startswith("budget exceeded"):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(args) -> int:
    G = parse_graph(args.graph)
    try:
        cert = NonTightnessCertificate.from_json(_load_json(args.certificate))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{args.certificate}: malformed certificate ({exc!r})") from None
    res = verify_certificate(G, cert)
    _emit(args, {"valid": res.ok, "reason": res.reason or None},
          "VALID" if res.ok else f"INVALID: {res.reason}")
    return EXIT_OK if res.ok else EXIT_INPUT


def _report_lines(rep, unit: str) -> list[str]:
    lines = [f"best bound {rep.bound}  alpha {rep.alpha}  gap {rep.gap}  inertia {rep.inertia}",
             f"{rep.iterations} {unit} evaluated"]
    if rep.partial:
        lines.append("PARTIAL: point budget exceeded")
    return lines


def cmd_search_circulant(args) -> int:
    params = PaleyParams.for_prime(args.q)
    rep = grid_search_circulant(params, args.range, max_points=args.max_points, threads=args.threads)
    lines = _report_lines(rep, "grid points")
    lines.append("weights " + " ".join(f"{k}:{w}" for k, w in rep.weights.items()))
    lines.append(f"{len(rep.argmin)} minimizing weightings (up to symmetry)")
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_BUDGET if rep.partial else EXIT_OK


def cmd_search_random(args) -> int:
    G = parse_graph(args.graph)
    alpha = independence_number(G).alpha
    rep = random_edge_search(G, alpha, args.iters, args.seed, max_weight=args.max_weight,
                             nonnegative=args.nonnegative, hill_climb=args.hill_climb,
                             threads=args.threads)
    lines = _report_lines(rep, "weightings")
    if rep.gap == 0:
        lines.append("GAP 0 FOUND: this weight matrix is optimal")
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inertiabound", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--threads", type=_nonneg_int, default=1, help="worker processes (default 1)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=_nonneg_int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("paley", cmd_paley, "emit P(q) as graph JSON").add_argument("q", type=int)
    add("alpha", cmd_alpha, "independence number with a witness").add_argument("graph")
    add("critical", cmd_critical, "alpha-criticality with per-edge witnesses").add_argument("graph")
    add("inertia", cmd_inertia, "exact inertia of a matrix file").add_argument("matrix")
    sp = add("bound", cmd_bound, "inertia bound of a weight matrix on a graph")
    sp.add_argument("graph")
    sp.add_argument("matrix")
    add("triangles", cmd_triangles, "list triangles").add_argument("graph")
    add("gadgets", cmd_gadgets, "enumerate gadget subgraphs").add_argument("graph")
    sp = add("certify", cmd_certify, "try to certify that the inertia bound is not tight")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", help="write the certificate JSON here")
    sp = add("verify", cmd_verify, "check a certificate against a graph")
    sp.add_argument("graph")
    sp.add_argument("certificate")
    sp = add("search-circulant", cmd_search_circulant, "exact grid search over Paley class weights")
    sp.add_argument("q", type=int)
    sp.add_argument("--range", type=parse_range, default=(-DEFAULT_RADIUS, DEFAULT_RADIUS),
                    help=f"weight interval a..b (default {-DEFAULT_RADIUS}..{DEFAULT_RADIUS}; "
                         "write --range=-5..5 for negative a)")
    sp.add_argument("--max-points", type=_nonneg_int, default=None)
    sp = add("search-random", cmd_search_random, "seeded random weight matrices on the edges")
    sp.add_argument("graph")
    sp.add_argument("--iters", type=_nonneg_int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-weight", type=_nonneg_int, default=64)
    sp.add_argument("--nonnegative", action="store_true", help="draw weights from 0..max")
    sp.add_argument("--hill-climb", type=_nonneg_int, default=0)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

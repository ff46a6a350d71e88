"""``basecraft`` command line interface.

Every subcommand writes one JSON document to stdout and a short summary to
stderr. Exit codes: 0 success, 1 usage error, 2 mismatch against an expected
value, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version

from . import actions, basesize, catalog, prodaction
from .matgrp import MatGroupSpec, centre_order, classical_generators
from .permcore import DEFAULT_ENUM_CAP, BudgetExceeded, PermGroup, cyclic_group, symmetric_group

SCHEMA = "basecraft/1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_BUDGET = 3

ACTIONS = ("vectors", "points", "iso-points", "subspaces:M", "iso-subspaces:M")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- group input ----------------------------------------------------------------

def _classical_action(spec_text: str, action: str, max_degree: int):
    """Returns ``(group, kernel order)``; the kernel is the scalar subgroup for projective actions."""
    spec = MatGroupSpec.parse(spec_text)
    spec.check()
    gens, form = classical_generators(spec)
    F = spec.field
    n = spec.n
    if action == "vectors":
        G, _ = actions.vector_action(gens, n, order=spec.order())
        return G, 1, spec
    if action in ("points", "iso-points") or action.startswith(("subspaces:", "iso-subspaces:")):
        m = 1 if action in ("points", "iso-points") else int(action.split(":", 1)[1])
        constraint = "totally-isotropic" if action.startswith("iso") else "all"
        if constraint != "all" and form is None:
            raise UsageError(f"{spec} preserves no form; use 'points' or 'subspaces:M'")
        kernel = centre_order(spec.family, n, spec.q)
        G, dom = actions.subspace_action(gens, n, F, m, constraint, form,
                                         order=spec.order() // kernel)
        if len(dom) > max_degree:
            raise BudgetExceeded(f"degree {len(dom)} exceeds --max-degree {max_degree}")
        return G, kernel, spec
    raise UsageError(f"unknown action {action!r}; expected one of {', '.join(ACTIONS)}")


def _load_group(args, need_case: bool = False):
    """Resolve ``--case``, ``--gens`` or ``--group/--action`` into a permutation group."""
    chosen = [x for x in (args.case, getattr(args, "gens", None), getattr(args, "group", None)) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --case, --gens or --group")
    if args.case:
        build = catalog.get_case(args.case)
        return build.action, {"case": args.case, "expected_b": build.record.expected_b}, build
    if need_case:
        raise UsageError("this command needs --case")
    if args.gens:
        G = catalog.ingest_generators(args.gens)
        return G, {"gens": args.gens}, None
    if not args.action:
        raise UsageError("--group needs --action")
    G, kernel, spec = _classical_action(args.group, args.action, args.max_degree)
    return G, {"group": args.group, "action": args.action, "kernel_order": kernel}, None


# -- subcommands ----------------------------------------------------------------

def cmd_order(args):
    chosen = [x for x in (args.case, args.gens, args.group) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --case, --gens or --group")
    if args.group:
        if not args.action:
            raise UsageError("--group needs --action")
        G, kernel, spec = _classical_action(args.group, args.action, args.max_degree)
        formula = spec.order()
        order = G.order()
        ok = order * kernel == formula
        report = {"group": args.group, "action": args.action, "degree": G.degree,
                  "order": order, "kernel_order": kernel, "formula_order": formula,
                  "agrees": ok}
        return report, (EXIT_OK if ok else EXIT_MISMATCH), \
            f"{args.group} on {G.degree} points: order {order} (formula {formula}, kernel {kernel})"
    G, info, _ = _load_group(args)
    report = {**info, "degree": G.degree, "order": G.order(), "base": G.chain.base,
              "transitive": G.is_transitive()}
    return report, EXIT_OK, f"degree {G.degree}, order {G.order()}"


def cmd_basesize(args):
    if args.case:
        build = catalog.get_case(args.case)
        info = {"case": args.case, "expected_b": build.record.expected_b}
        res = catalog.solve_case(build, budget=args.budget, seed=args.seed, trials=args.trials)
        report = {**info, "degree": build.degree, "order": build.G.order(), **res.to_json()}
    else:
        G, info, _ = _load_group(args)
        res = basesize.exact_base_size(G, budget=args.budget)
        report = {**info, "degree": G.degree, "order": G.order(), **res.to_json()}
    code = EXIT_OK
    expected = info.get("expected_b")
    if not res.exact:
        code = EXIT_BUDGET
    elif expected is not None and res.value != expected:
        code = EXIT_MISMATCH
    if expected is not None:
        report["matches_expected"] = res.value == expected if res.exact else None
    summary = f"b in [{res.lo}, {res.hi}]" if not res.exact else f"b = {res.value}"
    return report, code, summary


def cmd_qbound(args):
    G, info, _ = _load_group(args)
    rep = basesize.q_bound(G, args.c, cap=args.max_order, seed=args.seed)
    report = {**info, "degree": G.degree, "order": G.order(), **rep.to_json()}
    return report, EXIT_OK, f"Q(G,{args.c}) = {rep.total} ({rep.mode})"


def cmd_prob(args):
    G, info, _ = _load_group(args)
    report = {**info, "degree": G.degree, "order": G.order(), "c": args.c}
    if args.samples:
        est = basesize.mc_base_probability(G, args.c, args.samples, args.seed, args.threads)
        report["monte_carlo"] = est.to_json()
        summary = f"P(G,{args.c}) ~ {est.estimate:.4f} in [{est.interval[0]:.4f}, {est.interval[1]:.4f}]"
    else:
        p = basesize.exact_base_probability(G, args.c, budget=args.budget)
        report["exact"] = str(p)
        report["exact_float"] = float(p)
        summary = f"P(G,{args.c}) = {p}"
    return report, EXIT_OK, summary


def cmd_certify_norego(args):
    if not args.case:
        raise UsageError("certify-norego needs --case")
    build = catalog.get_case(args.case)
    info = {"case": args.case}
    cert, detail = basesize.no_regular_orbit_certificate(build.G, build.H, trials=args.trials,
                                                         seed=args.seed, cap=args.max_order)
    report = {**info, "certified": cert is not None, "detail": detail}
    if cert is not None:
        report["certificate"] = cert.to_json(build.G, build.H)
        report["replayed"] = basesize.NoRegularOrbitCertificate.replay(report["certificate"])
        return report, EXIT_OK, "no regular orbit: certificate found and replayed"
    return report, EXIT_MISMATCH, \
        f"no certificate ({detail['regular_double_cosets']} regular double cosets found)"


def _top_group(text: str) -> PermGroup:
    kind, m = text[0], int(text[1:])
    if kind == "S":
        return symmetric_group(m)
    if kind == "C":
        return cyclic_group(m)
    raise UsageError(f"top group must look like Sm or Cm, got {text!r}")


def cmd_prodact(args):
    L, info, build = _load_group(args)
    P = _top_group(args.top)
    verdict = prodaction.product_criterion(L, P, args.k, budget=args.budget)
    b_L = basesize.exact_base_size(L, budget=args.budget)
    bound = prodaction.wreath_base_bound(verdict.d_P, L.degree, b_L.hi)
    report = {**info, "inner_degree": L.degree, "inner_order": L.order(), "top": args.top,
              "d_P": verdict.d_P, "reg": verdict.reg, "k": args.k,
              "b_at_most_k": verdict.holds, "inner_base_size_upper": b_L.hi,
              "wreath_bound": bound}
    return report, EXIT_OK, (f"d(P) = {verdict.d_P}, reg(L,{args.k}) = {verdict.reg}, "
                             f"b <= {args.k}: {verdict.holds}, bound {bound}")


def cmd_table(args):
    ids = catalog.case_ids(args.suite)
    if not ids:
        raise UsageError(f"unknown or empty suite {args.suite!r}")
    rows = []
    mismatches = 0
    budget_hit = 0
    for cid in ids:
        rec = catalog.get_record(cid)
        if rec.status == catalog.UNSUPPORTED or (rec.status == catalog.STRETCH and not args.stretch):
            rows.append({"id": cid, "status": rec.status, "expected_b": rec.expected_b,
                         "computed": None})
            continue
        build = catalog.get_case(cid)
        res = catalog.solve_case(build, budget=args.budget, seed=args.seed, trials=args.trials)
        ok = res.exact and res.value == rec.expected_b
        if not res.exact:
            budget_hit += 1
        elif not ok:
            mismatches += 1
        rows.append({"id": cid, "status": rec.status, "expected_b": rec.expected_b,
                     "computed": res.value, "lo": res.lo, "hi": res.hi,
                     "degree": build.degree, "order": build.G.order(), "match": ok})
    checked = sum(1 for r in rows if r["computed"] is not None or "lo" in r)
    report = {"suite": args.suite, "rows": rows, "checked": checked,
              "mismatches": mismatches, "budget_exceeded": budget_hit}
    code = EXIT_MISMATCH if mismatches else EXIT_BUDGET if budget_hit else EXIT_OK
    return report, code, f"{args.suite}: {checked} rows checked, {mismatches} mismatches"


def cmd_case(args):
    if args.list:
        recs = [catalog.get_record(c).to_json() for c in catalog.case_ids(args.suite)]
        return {"cases": recs}, EXIT_OK, f"{len(recs)} cases"
    if not args.case:
        raise UsageError("give --case ID or --list")
    rec = catalog.get_record(args.case)
    report = rec.to_json()
    if rec.status != catalog.UNSUPPORTED:
        build = catalog.get_case(args.case)
        report.update({"degree": build.degree, "group_order": build.G.order(),
                       "stabiliser_order": build.H.order(),
                       "generators": [g.to_list_str() for g in build.action.gens]})
    return report, EXIT_OK, f"{args.case}: {rec.status}"


# -- parser ---------------------------------------------------------------------

def _add_group_opts(p, gens=True):
    p.add_argument("--case", help="catalog case id (see 'basecraft case --list')")
    if gens:
        p.add_argument("--gens", help="generator file: '# degree: n' and '# order: N' headers, "
                                      "then one permutation per line")
        p.add_argument("--group", help="classical group FAMILY-n-q, e.g. SU-5-2")
        p.add_argument("--action", help=f"action for --group: {', '.join(ACTIONS)}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed for every random choice")
    common.add_argument("--no-meta", action="store_true",
                        help="omit timing and version metadata (byte-stable output)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for Monte Carlo sampling (default 1); "
                             "results do not depend on it")
    common.add_argument("--max-order", type=int, default=DEFAULT_ENUM_CAP,
                        help=f"largest group enumerated element by element (default {DEFAULT_ENUM_CAP})")
    common.add_argument("--max-degree", type=int, default=actions.MAX_DOMAIN,
                        help=f"largest permutation domain built (default {actions.MAX_DOMAIN})")
    common.add_argument("--trials", type=int, default=2000,
                        help="random trials before a systematic fallback (default 2000)")
    common.add_argument("--budget", type=int, default=basesize.DEFAULT_NODE_BUDGET,
                        help=f"search node budget (default {basesize.DEFAULT_NODE_BUDGET})")

    parser = _Parser(prog="basecraft", description="Base sizes of permutation groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("order", parents=[common], help="group order and degree")
    _add_group_opts(p)
    p.set_defaults(func=cmd_order, randomized=False)

    p = sub.add_parser("basesize", parents=[common], help="exact base size with certificates")
    _add_group_opts(p)
    p.set_defaults(func=cmd_basesize, randomized=True)

    p = sub.add_parser("qbound", parents=[common], help="fixed point ratio sum Q(G,c)")
    _add_group_opts(p)
    p.add_argument("-c", type=int, required=True)
    p.set_defaults(func=cmd_qbound, randomized=True)

    p = sub.add_parser("prob", parents=[common], help="probability that c random points form a base")
    _add_group_opts(p)
    p.add_argument("-c", type=int, required=True)
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples (default: exact)")
    p.set_defaults(func=cmd_prob, randomized=True)

    p = sub.add_parser("certify-norego", parents=[common],
                       help="certify that H has no regular orbit on G/H")
    _add_group_opts(p, gens=False)
    p.set_defaults(func=cmd_certify_norego, randomized=True, gens=None, group=None, action=None)

    p = sub.add_parser("prodact", parents=[common], help="product action criterion reg(L,k) >= d(P)")
    _add_group_opts(p)
    p.add_argument("--top", default="C2", help="top group Sm or Cm (default C2)")
    p.add_argument("-k", type=int, default=5)
    p.set_defaults(func=cmd_prodact, randomized=True)

    p = sub.add_parser("table", parents=[common], help="regression against tabulated base sizes")
    p.add_argument("--suite", required=True, help="as1, psl2, as3 or prod")
    p.add_argument("--stretch", action="store_true", help="include long-running rows")
    p.set_defaults(func=cmd_table, randomized=True)

    p = sub.add_parser("case", parents=[common], help="show or list catalog cases")
    p.add_argument("--case")
    p.add_argument("--list", action="store_true")
    p.add_argument("--suite")
    p.set_defaults(func=cmd_case, randomized=False)
    return parser


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.randomized and args.seed is None:
        parser.exit(EXIT_USAGE, f"basecraft {args.command}: error: --seed is required\n")
    if args.seed is None:
        args.seed = 0
    if args.threads < 1:
        parser.exit(EXIT_USAGE, "basecraft: error: --threads must be positive\n")
    start = time.time()
    try:
        report, code, summary = args.func(args)
    except (UsageError, catalog.UnknownCase, catalog.UnsupportedCase, catalog.IngestError,
            ValueError, OSError) as exc:
        print(f"basecraft {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        report = {"error": "budget exceeded", "detail": str(exc)}
        code, summary = EXIT_BUDGET, f"budget exceeded: {exc}"
    out = {"schema": SCHEMA, "command": args.command, "seed": args.seed, "result": report}
    if not args.no_meta:
        out["meta"] = {"version": _version(), "elapsed_s": round(time.time() - start, 3),
                       "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")}
    print(json.dumps(out, indent=2, sort_keys=True))
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit status: 0 on success, 1 on a domain failure (inapplicable strategy,
failed certificate, oracle limit), 2 on usage, I/O or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import oracle
from .engine import classify_edges, critical_ranks_all, dump_result, f_posts, rank_maximal
from .instance import InstanceError, generate_random, parse_instance, replace_preferences, serialize_instance
from .strategies import Kind, Mode, StrategyError, dump_outcome, outcome_to_dict, run_strategy


class _Usage(Exception):
    pass


def _read(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from exc
    return parse_instance(text)


def _emit(args, human: str, machine) -> None:
    if args.format == "machine":
        sys.stdout.write(machine if isinstance(machine, str) else json.dumps(machine, indent=2) + "\n")
    else:
        sys.stdout.write(human)


def _applicant(args, inst) -> str:
    if not args.applicant:
        raise _Usage("--applicant is required")
    inst.check_applicant(args.applicant)
    return args.applicant


def cmd_solve(args) -> int:
    inst = _read(args.file)
    res = rank_maximal(inst)
    lines = [f"signature: ({', '.join(map(str, res.signature.counts))})"]
    for a, p in res.matching.ordered(inst):
        lines.append(f"{a} - {p}  (rank {inst.rank(a, p)})")
    if args.phases:
        for rec in res.phases:
            lines.append(f"phase {rec.phase}: " + " ".join(f"{a}-{p}/{k}" for a, p, k in rec.reduced_edges))
    _emit(args, "\n".join(lines) + "\n", dump_result(inst, res, phases=args.phases))
    return 0


def cmd_classify(args) -> int:
    inst = _read(args.file)
    classes = classify_edges(inst)
    human = "".join(f"{a} {p} rank {inst.rank(a, p)}: {c}\n" for (a, p), c in classes.items())
    machine = [{"applicant": a, "post": p, "rank": inst.rank(a, p), "class": c} for (a, p), c in classes.items()]
    _emit(args, human, machine)
    return 0


def cmd_fposts(args) -> int:
    inst = _read(args.file)
    a1 = _applicant(args, inst)
    fs = f_posts(inst, a1)
    _emit(args, " ".join(fs) + "\n", {"applicant": a1, "f_posts": fs})
    return 0


def cmd_critical(args) -> int:
    inst = _read(args.file)
    a1 = _applicant(args, inst)
    crit = critical_ranks_all(inst, a1)
    _emit(args, "".join(f"{p}: {c}\n" for p, c in crit.items()), {"applicant": a1, "critical_ranks": crit})
    return 0


def _human_outcome(inst, out) -> str:
    a1 = out.applicant
    lines = [
        f"strategy {out.kind.value} for {a1}",
        f"guaranteed: {out.guaranteed_post} (true rank {inst.rank(a1, out.guaranteed_post)}) in {out.guarantee_mode.value}",
        "falsified list (falsified rank: post [true rank]):",
    ]
    for i, p in enumerate(out.list.order, start=1):
        tr = inst.rank(a1, p)
        lines.append(f"  {i}: {p} [{tr if tr is not None else '-'}]")
    lines.append("certificate:")
    for c in out.certificate:
        lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    return "\n".join(lines) + "\n"


def cmd_strategy(args) -> int:
    inst = _read(args.file)
    a1 = _applicant(args, inst)
    try:
        out = run_strategy(inst, a1, args.kind)
    except StrategyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(args, _human_outcome(inst, out), dump_outcome(inst, out))
    return 0 if out.verified else 1


def cmd_oracle(args) -> int:
    inst = _read(args.file)
    guards = {"max_applicants": args.max_applicants, "max_posts": args.max_posts}
    if args.verify_strategy:
        a1 = _applicant(args, inst)
        try:
            out = run_strategy(inst, a1, args.verify_strategy)
        except StrategyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        h = replace_preferences(inst, a1, out.list)
        cls = oracle.oracle_edge_class(h, a1, out.guaranteed_post, **guards)
        ok = cls == oracle.EVERY if out.guarantee_mode is Mode.EVERY else cls != oracle.NONE
        doc = {"outcome": outcome_to_dict(inst, out), "oracle_class": cls, "confirmed": ok}
        human = _human_outcome(inst, out) + f"oracle: ({a1}, {out.guaranteed_post}) is {cls}; confirmed={ok}\n"
        _emit(args, human, doc)
        return 0 if ok else 1
    if args.min_max_search:
        a1 = _applicant(args, inst)
        res = oracle.exhaustive_min_max(inst, a1, max_search_posts=args.max_search_posts, **guards)
        posts = sorted({p for got in res.optimal_posts() for p in got}, key=lambda p: (p is None, str(p)))
        doc = {
            "applicant": a1,
            "optimal_worst_true_rank": res.optimum,
            "optimal_lists": [list(lst) for lst in res.optimal_lists],
            "optimal_posts": posts,
        }
        human = (
            f"optimal worst true rank for {a1}: {res.optimum}\n"
            f"{len(res.optimal_lists)} optimal lists of {len(res.outcomes)}; posts obtained: {posts}\n"
        )
        _emit(args, human, doc)
        return 0
    rmms = oracle.enumerate_rmm(inst, **guards)
    doc = {
        "signature": list(rmms.signature.counts),
        "matchings": [[list(e) for e in m.ordered(inst)] for m in rmms.matchings],
    }
    human = f"signature: ({', '.join(map(str, rmms.signature.counts))})\n" + "".join(
        f"{i}: " + " ".join(f"{a}-{p}" for a, p in m.ordered(inst)) + "\n"
        for i, m in enumerate(rmms.matchings, start=1)
    )
    _emit(args, human, doc)
    return 0


def cmd_gen(args) -> int:
    inst = generate_random(args.applicants, args.posts, args.max_rank, args.tie_prob, args.seed)
    sys.stdout.write(serialize_instance(inst))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "machine"], default="human")

    p = argparse.ArgumentParser(prog="rankmax", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="rank-maximal matching and signature")
    s.add_argument("file")
    s.add_argument("--phases", action="store_true", help="dump reduced graphs per phase")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("classify", parents=[common], help="edge classes over all rank-maximal matchings")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    for name, func, text in (
        ("fposts", cmd_fposts, "f-posts of an applicant"),
        ("critical", cmd_critical, "critical ranks of all non-edges of an applicant"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.add_argument("--applicant", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("strategy", parents=[common], help="synthesize a falsified list")
    s.add_argument("file")
    s.add_argument("--applicant", required=True)
    s.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    s.set_defaults(func=cmd_strategy)

    s = sub.add_parser("oracle", parents=[common], help="brute-force checks on small instances")
    s.add_argument("file")
    s.add_argument("--applicant")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--enumerate", action="store_true", help="list all rank-maximal matchings (default)")
    mode.add_argument("--verify-strategy", choices=[k.value for k in Kind])
    mode.add_argument("--min-max-search", action="store_true")
    s.add_argument("--max-applicants", type=int, default=oracle.MAX_APPLICANTS)
    s.add_argument("--max-posts", type=int, default=oracle.MAX_POSTS)
    s.add_argument("--max-search-posts", type=int, default=oracle.MAX_SEARCH_POSTS)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen", help="seeded random instance")
    s.add_argument("--applicants", type=int, required=True)
    s.add_argument("--posts", type=int, required=True)
    s.add_argument("--max-rank", type=int, required=True)
    s.add_argument("--tie-prob", type=float, default=0.0)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_gen)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (_Usage, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except oracle.OracleGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line: ``sbmatch run|verify|generate|montecarlo``.

Exit codes: 0 success, 1 a verification check failed, 2 unreadable or
malformed instance, 3 invalid parameters, 4 instance too large to verify.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import InstanceError, InvalidParams, InvalidSpec, TooLarge
from .instance import generate_random, parse_instance, serialize_instance, with_coverage, with_cut, with_matroid
from .runner import ALGORITHMS, default_params, make_report, montecarlo

log = logging.getLogger("sbmatch")

EXIT_CHECK, EXIT_PARSE, EXIT_PARAMS, EXIT_GUARD = 1, 2, 3, 4


def _add_algorithm_flags(p):
    p.add_argument("instance", help="instance file ('-' for stdin)")
    p.add_argument("--alg", choices=ALGORITHMS, default="weighted")
    p.add_argument("--eps", type=float, help="threshold slack; default per algorithm")
    p.add_argument("--gamma", type=float, help="matroid threshold factor (default 2)")
    p.add_argument("--p", type=float, help="sampling probability; default depends on --alg")
    p.add_argument("--d", type=int, choices=(0, 1), help="1 enables eviction of deep queue elements")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="compare against the exhaustive optimum")
    p.add_argument("--json", metavar="OUT", help="also write the report to OUT")


def build_parser():
    parser = argparse.ArgumentParser(prog="sbmatch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="stream an instance and print a JSON report")
    _add_algorithm_flags(run)

    verify = sub.add_parser("verify", help="run, compare with the optimum and audit invariants")
    _add_algorithm_flags(verify)

    mc = sub.add_parser("montecarlo", help="repeat a randomized run over seeds")
    _add_algorithm_flags(mc)
    mc.set_defaults(alg="submod-nonmono")
    mc.add_argument("--replicas", type=int, default=100)
    mc.add_argument("--base-seed", type=int, default=0)
    mc.add_argument("--jobs", type=int, default=1, help="worker processes")

    gen = sub.add_parser("generate", help="write a random instance")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--m", type=int, default=12)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--b-max", type=int, default=2)
    gen.add_argument("--w-max", type=int, default=20)
    gen.add_argument("--objective", choices=("linear", "coverage", "cut"), default="linear")
    gen.add_argument("--items", type=int, default=8, help="coverage: number of items")
    gen.add_argument("--density", type=float, default=0.5, help="cut: interaction density")
    gen.add_argument("--matroid", choices=("none", "uniform", "partition", "graphic"), default="none")
    gen.add_argument("--rank", type=int, help="uniform matroid rank")
    gen.add_argument("--parts", type=int, default=3, help="partition matroid: number of parts")
    gen.add_argument("--aux-n", type=int, default=4, help="graphic matroid: auxiliary vertices")
    gen.add_argument("-o", "--output", help="file to write (default stdout)")
    return parser


def _read_instance(path):
    if path == "-":
        return parse_instance(sys.stdin.buffer.read())
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def _emit(report, out):
    text = json.dumps(report, indent=2)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _generate(args):
    inst = generate_random(args.seed, args.n, args.m, args.k, args.b_max, args.w_max)
    if args.objective == "coverage":
        inst = with_coverage(inst, args.seed + 1, args.items)
    elif args.objective == "cut":
        inst = with_cut(inst, args.seed + 1, args.density)
    if args.matroid != "none":
        inst = with_matroid(
            inst, args.seed + 2, args.matroid, rank=args.rank, n_parts=args.parts, aux_n=args.aux_n
        )
    text = serialize_instance(inst)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")

    try:
        if args.command == "generate":
            return _generate(args)
        inst = _read_instance(args.instance)
    except (InstanceError, OSError, UnicodeDecodeError) as exc:
        log.error("cannot read instance: %s", exc)
        return EXIT_PARSE
    except InvalidParams as exc:
        log.error("%s", exc)
        return EXIT_PARAMS

    try:
        params = default_params(
            args.alg, inst.k, eps=args.eps, gamma=args.gamma, p=args.p, d=args.d, seed=args.seed
        )
        if args.command == "montecarlo":
            report = montecarlo(
                inst,
                args.alg,
                params,
                args.replicas,
                base_seed=args.base_seed,
                jobs=args.jobs,
                verify=args.verify,
                source=args.instance,
            )
        else:
            audits = args.command == "verify"
            report = make_report(
                inst, args.alg, params, source=args.instance, verify=args.verify or audits, audits=audits
            )
    except (InvalidParams, InvalidSpec) as exc:
        log.error("invalid parameters: %s", exc)
        return EXIT_PARAMS
    except TooLarge as exc:
        log.error("%s", exc)
        return EXIT_GUARD

    _emit(report, args.json)
    if args.command == "verify":
        failed = [name for name, v in report["checks"].items() if v]
        bound, ratio = report["bound"], report["realized_ratio"]
        if bound is not None and (ratio is None or ratio > bound * (1 + 1e-9)):
            failed.append("approximation_bound")
        if failed:
            log.error("failed checks: %s", ", ".join(failed))
            return EXIT_CHECK
    return 0


if __name__ == "__main__":
    sys.exit(main())

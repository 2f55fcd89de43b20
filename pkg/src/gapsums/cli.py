"""Command-line entry point: ``gapsums <subcommand>``.

Exit codes: 0 success, 1 bad input, 2 invariant violation (witness on
stderr), 3 guard or resource limit, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .characters import DirichletCharacter
from .errors import InvariantViolation, ResourceError, SamplingError
from .fourier import fourier_profile, l1_bound
from .gap import Gap, is_proper_kernel
from .harness import KINDS, SweepConfig, counterexample_demo, extremal_search, iter_sweep, write_report
from .sums import PolynomialModQ, character_sum_over_gap, multilinear_character_sum, poly_exp_sum_over_gap

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_RESOURCE, EXIT_IO = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for invariant violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _load_json_arg(text: str):
    """Inline JSON, or @path to read it from a file."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


# --- subcommands -----------------------------------------------------------------

SWEEP_FLAGS = {
    # SweepConfig field: (type, nargs)
    "q_min": (int, None),
    "q_max": (int, None),
    "moduli": (str, None),
    "kind": (str, None),
    "r": (int, "+"),
    "s": (int, None),
    "exhaustive_cutoff": (int, None),
    "gap_samples": (int, None),
    "characters": (str, None),
    "character_samples": (int, None),
    "degrees": (int, "+"),
    "polynomial_samples": (int, None),
    "seed": (int, None),
    "output": (str, None),
    "format": (str, None),
}


def cmd_sweep(args) -> int:
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    overrides = {k: getattr(args, k) for k in SWEEP_FLAGS if getattr(args, k) is not None}
    config = SweepConfig.from_dict({**base, **overrides})
    skip = lambda msg: print(f"skipped: {msg}", file=sys.stderr)  # noqa: E731
    rows = iter_sweep(config, skip)
    if config.output in (None, "-"):
        write_report(rows, config.format, sys.stdout)
        return EXIT_OK
    try:
        fh = open(config.output, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report {config.output}: {exc.strerror}") from exc
    with fh:
        write_report(rows, config.format, fh)
    return EXIT_OK


def cmd_search(args) -> int:
    res = extremal_search(args.q, args.r, args.budget, args.seed, steps=args.steps)
    _emit_json(res.to_json())
    if not res.is_empty and abs(res.reevaluate() - res.magnitude) > 1e-9:
        raise InvariantViolation("witness does not reproduce its magnitude", res.to_json())
    return EXIT_OK


def cmd_demo(args) -> int:
    rep = counterexample_demo(args.q, args.H)
    _emit_json(rep.to_json())
    if rep.difference > 1e-6:
        raise InvariantViolation("the double sum and the weighted sum differ", rep.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_all

    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_all(only)
    failed = [r for r in results if r.asserted and not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed or reported")
    if failed:
        for r in failed:
            print(f"failed: {r.line()}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_l1norm(args) -> int:
    gap = Gap.from_json(_load_json_arg(args.gap))
    prof = fourier_profile(gap)
    proper = is_proper_kernel(gap)
    _emit_json({
        "gap": gap.to_json(),
        "proper": proper,
        "l1": prof.l1,
        "linf": prof.linf,
        "parseval": prof.parseval,
        "l1_bound_shape": l1_bound(gap) if proper else None,
    })
    return EXIT_OK


def cmd_charsum(args) -> int:
    gap = Gap.from_json(_load_json_arg(args.gap))
    if args.poly is not None:
        rep = poly_exp_sum_over_gap(PolynomialModQ(gap.q, tuple(args.poly)), gap)
    else:
        chi = DirichletCharacter.from_exponents(gap.q, tuple(args.exponents))
        rep = character_sum_over_gap(chi, gap) if gap.s == 1 else multilinear_character_sum(chi, gap)
    _emit_json(rep.to_json())
    if not rep.chain_holds():
        raise InvariantViolation("completion chain fails", rep.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gapsums", description="Sweeps, searches and one-shot evaluators for sums over GAPs mod q.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sweep", help="sweep moduli, characters or polynomials, and GAPs; write a report")
    sp.add_argument("--config", help="JSON file with SweepConfig fields; flags override it")
    for name, (typ, nargs) in SWEEP_FLAGS.items():
        kw = {"type": typ, "default": None}
        if nargs:
            kw["nargs"] = nargs
        if name == "kind":
            kw["choices"] = KINDS
        if name == "format":
            kw["choices"] = ("csv", "jsonl")
        sp.add_argument("--" + name.replace("_", "-"), dest=name, **kw)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("search", help="extremal search for the largest character sum over rank-r GAPs")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--budget", type=int, required=True, help="(GAP, character) evaluations allowed")
    sp.add_argument("--seed", type=int, help="required when the search is not exhaustive")
    sp.add_argument("--steps", type=int, default=50, help="local moves per random restart")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("demo-counterexample", help="the H x H multiset whose sum is 2 sum chi(n)(H - n)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--H", type=int, required=True)
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("verify", help="run the acceptance checks (minutes)")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("l1norm", help="l1 norm of the Fourier coefficients of a GAP")
    sp.add_argument("--gap", required=True, help="GAP JSON, or @file")
    sp.set_defaults(func=cmd_l1norm)

    sp = sub.add_parser("charsum", help="one character or polynomial sum over a GAP")
    sp.add_argument("--gap", required=True, help="GAP JSON, or @file")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--exponents", type=int, nargs="+", help="character exponent vector")
    g.add_argument("--poly", type=int, nargs="+", help="coefficients c0 c1 ... cd")
    sp.set_defaults(func=cmd_charsum)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        print(json.dumps(exc.witness), file=sys.stderr)
        return EXIT_INVARIANT
    except (ResourceError, SamplingError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

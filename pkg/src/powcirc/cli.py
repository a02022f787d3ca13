"""Command-line driver.

Answers go to stdout as a single token (``trivial``, ``LT``, an integer, ...);
anything meant for people goes to stderr.  Exit status: 0 success, 1 for a
``nontrivial`` word, 2 for usage or input errors, 3 when a budget is exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .arith import arith_from_json, arith_to_json, arith_to_pc, pc_to_arith
from .baumslag import bg_tower_word, bg_word_problem
from .core import DEFAULT_BUDGET_BITS, pc_eval_exact
from .errors import BudgetExceeded, PowCircError
from .gadget import bool_from_json, bool_normalize, bool_to_pc_gadget
from .jsonio import (
    circuit_from_json,
    circuit_to_json,
    dumps,
    loads,
    read_json,
    reduced_to_json,
    write_json,
)
from .reduce import pc_compare, pc_reduce, rpc_trim
from .sdr import Ordering

BUDGET_ENV = "POWCIRC_BUDGET_BITS"

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def budget_bits(flag: Optional[int]) -> int:
    """The ``--budget`` flag, else ``$POWCIRC_BUDGET_BITS``, else the default."""
    if flag is not None:
        return flag
    env = os.environ.get(BUDGET_ENV)
    if env is None or not env.strip():
        return DEFAULT_BUDGET_BITS
    try:
        value = int(env)
    except ValueError:
        raise UsageError("%s must be an integer, got %r" % (BUDGET_ENV, env)) from None
    if value < 0:
        raise UsageError("%s must be non-negative" % BUDGET_ENV)
    return value


def _emit(data, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(dumps(data) + "\n")
    else:
        write_json(path, data)


def _load_circuit(path: str):
    data = loads(sys.stdin.read()) if path == "-" else read_json(path)
    return circuit_from_json(data)


def _marking(markings, name: str):
    try:
        return markings[name]
    except KeyError:
        raise UsageError("no marking named %r (have: %s)" % (name, ", ".join(sorted(markings)) or "none")) from None


def cmd_wp(args) -> int:
    trivial = bg_word_problem(args.word)
    print("trivial" if trivial else "nontrivial")
    return EXIT_OK if trivial else EXIT_NO


def cmd_reduce(args) -> int:
    pc, markings, _ = _load_circuit(args.input)
    names = [args.marking] if args.marking else sorted(markings)
    chosen = {name: _marking(markings, name) for name in names}
    res = pc_reduce(pc, chosen)
    reduced, marks = res.reduced, res.markings
    if not args.full:
        reduced, marks = rpc_trim(reduced, marks)
    _emit(reduced_to_json(reduced, marks), args.output)
    print("reduced %d nodes to %d in %d rounds" % (len(pc), len(reduced), res.iterations),
          file=sys.stderr)
    return EXIT_OK


def cmd_cmp(args) -> int:
    pc, markings, _ = _load_circuit(args.input)
    res = pc_compare(pc, _marking(markings, args.left), _marking(markings, args.right), args.method)
    print(res.name)
    return EXIT_OK


def cmd_convert(args) -> int:
    if args.to_arith:
        pc, markings, _ = _load_circuit(args.input)
        c = pc_to_arith(pc, _marking(markings, args.marking))
        _emit(arith_to_json(c), args.output)
        print("%d gates" % len(c), file=sys.stderr)
        return EXIT_OK
    c = arith_from_json(read_json(args.input))
    pc, m, integral = arith_to_pc(c)
    _emit(circuit_to_json(pc, {args.marking: m}), args.output)
    if not integral:
        print("warning: some 2**x gate sees a negative number; not a power circuit",
              file=sys.stderr)
    return EXIT_OK


def cmd_gadget(args) -> int:
    c = bool_from_json(read_json(args.input))
    if not c.is_layered():
        c = bool_normalize(c)
    bits = args.assign
    if any(ch not in "01" for ch in bits):
        raise UsageError("--assign takes a string of 0s and 1s")
    g = bool_to_pc_gadget(c)
    if len(bits) != len(g.V):
        raise UsageError("circuit has %d inputs, --assign gives %d" % (len(g.V), len(bits)))
    pc = g.apply([int(ch) for ch in bits])
    _emit(circuit_to_json(pc, {"A": {g.A: 1}, "B": {g.B: 1}}), args.output)
    value = pc_compare(pc, {g.A: 1}, {g.B: 1}) is not Ordering.GT
    print(int(value))
    print("A <= B" if value else "A > B", file=sys.stderr)
    return EXIT_OK


def cmd_tower(args) -> int:
    print(bg_tower_word(args.n))
    return EXIT_OK


def cmd_eval(args) -> int:
    budget = budget_bits(args.budget)
    pc, markings, _ = _load_circuit(args.input)
    print(pc_eval_exact(pc, _marking(markings, args.marking), budget))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powcirc", description="Power circuits and the Baumslag group word problem.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wp", help="decide whether a word over aAbBtT1 is trivial")
    p.add_argument("word")
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("reduce", help="reduce a circuit and make markings compact")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--marking", help="marking to keep (default: all)")
    p.add_argument("-o", "--output")
    p.add_argument("--full", action="store_true",
                   help="keep every node of the reduction, not only those the markings reach")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("cmp", help="compare two markings")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-l", "--left", required=True)
    p.add_argument("-m", "--right", required=True)
    p.add_argument("--method", choices=("sequential", "layered"), default="sequential")
    p.set_defaults(func=cmd_cmp)

    p = sub.add_parser("convert", help="convert between power and arithmetic circuits")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-arith", action="store_true")
    g.add_argument("--to-pc", action="store_true")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--marking", default="value")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("gadget", help="encode a Boolean circuit as a power-circuit comparison")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--assign", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("tower", help="print the tower word w_N")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("eval", help="exact value of a marking")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--marking", required=True)
    p.add_argument("--budget", type=int, help="largest exponent allowed, in bits (env %s)" % BUDGET_ENV)
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print("budget exceeded: %s" % e, file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, PowCircError, OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

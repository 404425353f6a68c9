"""
Command-line grammar.

    affine-cocenter VERB --group GROUP [--twist DELTA] [verb options] [--json] [--dot FILE] [--csv FILE]

GROUP is a preset name (GL3, SL4, PGL3, Sp4, ...) or a path to a .toml group spec. Element options are
parsed against the group, so an out-of-range label is a parse error rather than a domain error.
"""
import argparse
from dataclasses import dataclass, field
from typing import Any

from affine_weyl import AffineElt, AffineWeylGroup, TwistAuto
from budget import Budget, DEFAULT_BUDGET
from errors import CommandParseError, DomainError, ExpressionError
from expressions import parse_element, parse_int_vector, parse_labels
from group_spec import resolve_group

VERBS = ("describe", "length", "reduce", "classpoly", "dim", "adm", "bgmu", "chartable", "poset", "quadruple")
POSET_KINDS = ("bruhat", "conjugation", "straight", "newton")
BUDGET_FLAGS = ("length_bound", "memo_entries", "frontier", "search_slack", "omega_window", "kappa_window")


@dataclass(frozen=True)
class Command:
    verb: str
    group: str
    twist: str | None
    args: dict[str, Any]
    output: str = "text"
    dot: str | None = None
    csv: str | None = None
    cache: str | None = None
    verbose: bool = False
    budget: Budget = DEFAULT_BUDGET
    affine: AffineWeylGroup | None = field(default=None, compare=False, repr=False)
    delta: TwistAuto | None = field(default=None, compare=False, repr=False)
    elements: dict[str, AffineElt] = field(default_factory=dict, compare=False, repr=False)

    @property
    def json(self) -> bool:
        return self.output == "json"


class CommandArgumentParser(argparse.ArgumentParser):
    """Raises CommandParseError instead of printing usage and exiting."""

    def __init__(self, *args, argv: list[str] | None = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.argv = argv or []

    def error(self, message):
        token, position = _locate(self.argv, message)
        raise CommandParseError(message, token, position)


def _locate(argv: list[str], message: str) -> tuple[str | None, int | None]:
    for i, token in enumerate(argv):
        if token.startswith("-") and token in message:
            return token, i
    for i, token in enumerate(argv):
        if f"'{token}'" in message:
            return token, i
    return None, None


def _add_common(parser: argparse.ArgumentParser, group_required: bool = True):
    parser.add_argument("--group", required=group_required, help="preset name or path to a .toml group spec")
    parser.add_argument("--twist", help="id, diagram, tau^k or diagram*tau^k")
    parser.add_argument("--json", action="store_true", help="print the JSON report on stdout")
    parser.add_argument("--dot", metavar="FILE", help="write a DOT graph")
    parser.add_argument("--csv", metavar="FILE", help="write a CSV table")
    parser.add_argument("--verbose", action="store_true")
    for name in BUDGET_FLAGS:
        parser.add_argument("--" + name.replace("_", "-"), dest=name, type=int)


def build_parser(argv: list[str]) -> CommandArgumentParser:
    parser = CommandArgumentParser(prog="affine-cocenter", argv=argv, allow_abbrev=False,
                                   description="Twisted conjugacy classes, class polynomials and strata of extended affine Weyl groups.")
    verbs = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = verbs.add_parser(name, help=help_text, argv=argv, allow_abbrev=False)
        _add_common(sub, group_required=name != "chartable")
        return sub

    verb("describe", "root datum, Omega and the twist")

    verb("length", "length, reduced word and invariants of an element").add_argument("--w", required=True)

    verb("reduce", "reduce an element to minimal length in its class").add_argument("--w", required=True)

    classpoly = verb("classpoly", "class polynomials of T_w in the cocenter")
    mode = classpoly.add_mutually_exclusive_group(required=True)
    mode.add_argument("--w")
    mode.add_argument("--rigid", action="store_true", help="basis of the rigid cocenter")
    mode.add_argument("--zero-hecke", dest="zero_hecke", metavar="LABELS", help="0-Hecke classes of W_K for K = LABELS")
    classpoly.add_argument("--seed", type=int, help="shuffle descent choices with this seed")
    classpoly.add_argument("--cache", metavar="DIR")

    dim = verb("dim", "dimension of X_w(b) or of a parahoric stratum")
    dim.add_argument("--w", required=True)
    dim.add_argument("--b", required=True, help="'identity' or an element whose class is [b]")
    dim.add_argument("--K", default="", help="parahoric type, e.g. 1,2")
    dim.add_argument("--tree", action="store_true", help="include the reduction tree")
    dim.add_argument("--prefer", default="", help="labels tried first as descents of the reduction tree, e.g. 1")
    dim.add_argument("--cache", metavar="DIR")

    adm = verb("adm", "admissible set of a dominant cocharacter")
    adm.add_argument("--mu", required=True)
    adm.add_argument("--K", default="")

    verb("bgmu", "the set B(G, mu)").add_argument("--mu", required=True)

    chartable = verb("chartable", "character table of a finite Hecke algebra (A2 or C2)")
    chartable.add_argument("--params", default="", help="specializations, e.g. q1=2,q2=3")
    chartable.add_argument("--equal", action="store_true", help="equal parameters for C2")
    chartable.add_argument("--kernel", help="trace kernel at a specialization, e.g. q=-1 or 'q=q**2+q+1'")

    poset = verb("poset", "closure posets and their Hasse diagrams")
    poset.add_argument("--kind", choices=POSET_KINDS, required=True)
    poset.add_argument("--elements", help="elements separated by ';'")
    poset.add_argument("--K", default="")
    poset.add_argument("--mu")
    poset.add_argument("--bound", type=int, help="length bound for straight classes")

    quadruple = verb("quadruple", "standard quadruple and canonical label of a class")
    mode = quadruple.add_mutually_exclusive_group(required=True)
    mode.add_argument("--w")
    mode.add_argument("--enumerate", type=int, metavar="L", help="all classes met below length L")
    return parser


def _parse_with(argv: list[str], name: str, action):
    try:
        return action()
    except ExpressionError as e:
        flag = "--" + name
        position = argv.index(flag) + 1 if flag in argv else None
        token = argv[position] if position is not None and position < len(argv) else None
        raise CommandParseError(f"--{name}: {e.message} (character {e.position})", token, position)


def parse_command(argv: list[str]) -> Command:
    argv = list(argv)
    args = vars(build_parser(argv).parse_args(argv))
    verb = args.pop("verb")
    group = args.pop("group")
    twist = args.pop("twist")
    output = "json" if args.pop("json") else "text"
    dot, csv, verbose = args.pop("dot"), args.pop("csv"), args.pop("verbose")
    cache = args.pop("cache", None)
    budget = DEFAULT_BUDGET.override(**{name: args.pop(name) for name in BUDGET_FLAGS})

    if verb == "chartable":
        return Command(verb, group or "A2", twist, args, output, dot, csv, cache, verbose, budget)

    affine, delta = resolve_group(group, twist, budget)
    elements: dict[str, AffineElt] = {}
    if args.get("w"):
        elements["w"] = _parse_with(argv, "w", lambda: parse_element(affine, args["w"]))
    if args.get("b"):
        text = args["b"].strip()
        elements["b"] = affine.identity if text == "identity" else _parse_with(argv, "b", lambda: parse_element(affine, text))
    if args.get("elements"):
        for i, text in enumerate(args["elements"].split(";")):
            elements[f"element{i}"] = _parse_with(argv, "elements", lambda: parse_element(affine, text))
    if "K" in args:
        args["K"] = _parse_with(argv, "K", lambda: parse_labels(args["K"]))
        unknown = sorted(set(args["K"]) - set(affine.labels))
        if unknown:
            raise CommandParseError(f"--K: labels {unknown} are out of range: labels are {affine.labels}",
                                    *_flag_value(argv, "K"))
    if "prefer" in args:
        args["prefer"] = _parse_with(argv, "prefer", lambda: parse_int_vector(args["prefer"]) if args["prefer"].strip() else ())
        unknown = sorted(set(args["prefer"]) - set(affine.labels))
        if unknown:
            raise CommandParseError(f"--prefer: labels {unknown} are out of range: labels are {affine.labels}",
                                    *_flag_value(argv, "prefer"))
    if args.get("zero_hecke") is not None:
        args["zero_hecke"] = _parse_with(argv, "zero-hecke", lambda: parse_labels(args["zero_hecke"]))
    if args.get("mu"):
        display = _parse_with(argv, "mu", lambda: parse_int_vector(args["mu"]))
        try:
            args["mu"] = affine.datum.frame.from_display(display)
        except DomainError as e:
            raise CommandParseError(f"--mu: {e}", *_flag_value(argv, "mu"))
    return Command(verb, group, twist, args, output, dot, csv, cache, verbose, budget, affine, delta, elements)


def _flag_value(argv: list[str], name: str) -> tuple[str | None, int | None]:
    flag = "--" + name
    if flag in argv and argv.index(flag) + 1 < len(argv):
        position = argv.index(flag) + 1
        return argv[position], position
    return None, None

import logging
import os
import random
import sys
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import dotenv
from pydantic import BaseModel

from char_tables import finite_char_table, trace_kernel_at
from class_poly_store import ClassPolyStore
from colors import Colors, degree_color
from command import Command, parse_command
from conjugacy import conjugacy_for
from errors import CommandParseError, ConsistencyError, DomainError, ExpressionError, ResourceError
from expressions import format_element, format_labels, format_word
from fileutils import write_output
from hecke_cocenter import cocenter_for
from posets import bruhat_poset, newton_closure, partial_conjugation_order, straight_class_order
from quadruples import enumerate_classes, quadruples_for
from reports import (AdmissibleReport, BgMuClass, BgMuReport, CharTableReport, ClassKeyReport, ClassListReport,
                     ClassPolyReport, DescribeReport, DimensionReport, ElementReport, InvariantReport, LengthReport,
                     PosetReport, QuadrupleCommandReport, QuadrupleReport, TraceReport, ZeroHeckeBasisReport,
                     ZeroHeckeReport, char_table_csv, invariant_text, poset_dot, to_json, trace_dot, tree_dot)
from strata import clear_caches, strata_for
from timing import timer
from tree_printer import tree
from utils.logging_util import LoggingUtil
from with_step import maybe_step

dotenv.load_dotenv()

EXIT_OK = 0
EXIT_CONSISTENCY = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_RESOURCE = 4


@dataclass
class RunResult:
    output: str
    exit_code: int = EXIT_OK
    report: BaseModel | None = None


def _finish(cmd: Command, report: BaseModel, dot: str | None = None, csv: str | None = None) -> RunResult:
    if cmd.dot:
        if dot is None:
            raise DomainError(f"{cmd.verb} has no DOT output")
        write_output(cmd.dot, dot)
        logging.getLogger("main").info(f"Wrote {Colors.BRIGHT_CYAN}{cmd.dot}{Colors.END}")
    if cmd.csv:
        if csv is None:
            raise DomainError(f"{cmd.verb} has no CSV output")
        write_output(cmd.csv, csv)
        logging.getLogger("main").info(f"Wrote {Colors.BRIGHT_CYAN}{cmd.csv}{Colors.END}")
    return RunResult(to_json(report) if cmd.json else "", EXIT_OK, report)


def _store(cmd: Command) -> ClassPolyStore | None:
    return ClassPolyStore(Path(cmd.cache)) if cmd.cache else None


def run_describe(cmd: Command) -> RunResult:
    report = DescribeReport.of(cmd.delta)
    if not cmd.json:
        with tree.nested(f"{report.group}, twist {cmd.delta.describe()}"):
            tree.info(f"rank {report.rank}, semisimple rank {report.semisimple_rank}, |W_0| = {report.finite_weyl_order}")
            tree.info(f"Cartan matrix {report.cartan}")
            tree.info(f"simple affine reflections {report.labels}")
            tree.info(f"Omega = {report.omega}, Omega_delta = {report.kottwitz_group}")
            tree.info(f"twist on labels {report.twist_permutation}")
    return _finish(cmd, report)


def run_length(cmd: Command) -> RunResult:
    w = cmd.elements["w"]
    context = conjugacy_for(cmd.delta)
    invariant = context.newton_kottwitz(w)
    report = LengthReport(element=ElementReport.of(w), invariant=InvariantReport.of(invariant, cmd.affine),
                          straight=context.is_straight(w), minimal_length=context.minimal_length(w))
    if not cmd.json:
        with tree.nested(format_element(w)):
            tree.info(f"length {report.element.length}, reduced word {report.element.word}")
            tree.info(invariant_text(invariant, cmd.affine))
            tree.info(f"straight: {report.straight}, minimal length in class: {report.minimal_length}")
    return _finish(cmd, report)


def run_reduce(cmd: Command) -> RunResult:
    trace = conjugacy_for(cmd.delta).reduce_to_minimal(cmd.elements["w"])
    if not cmd.json:
        with tree.nested("reduction to minimal length"):
            tree.reduction_trace(trace)
    return _finish(cmd, TraceReport.of(trace, cmd.delta), dot=trace_dot(trace))


def run_classpoly(cmd: Command) -> RunResult:
    cocenter = cocenter_for(cmd.delta)
    name, twist = cmd.affine.datum.name, cmd.delta.label
    if cmd.args.get("rigid"):
        keys = cocenter.rigid_basis()
        report = ClassListReport(group=name, twist=twist, length_bound=cocenter.default_rigid_bound(),
                                 classes=[ClassKeyReport.of(key, cmd.affine) for key in keys])
        if not cmd.json:
            with tree.nested(f"rigid cocenter of {name}: {len(keys)} basis elements"):
                for key in keys:
                    tree.info(f"{key.label.describe()}  length {key.min_length}")
        return _finish(cmd, report)
    if cmd.args.get("zero_hecke") is not None:
        labels = cmd.args["zero_hecke"]
        classes = cocenter.zero_hecke_finite(labels)
        report = ZeroHeckeBasisReport(group=name, twist=twist, K=format_labels(labels),
                                      classes=[ZeroHeckeReport.of(c) for c in classes])
        if not cmd.json:
            with tree.nested(f"0-Hecke cocenter of W_K, K = {format_labels(labels)}: {len(classes)} classes"):
                for c in report.classes:
                    tree.info(f"{c.representative}  support {c.support}, {c.size} elements")
        return _finish(cmd, report)

    w = cmd.elements["w"]
    seed = cmd.args.get("seed")

    def compute() -> dict:
        rng = random.Random(seed) if seed is not None else None
        return ClassPolyReport.of(cocenter.class_poly(w, rng), cmd.delta).model_dump(mode="json")

    store = _store(cmd)
    with maybe_step(f"class polynomials of {format_element(w)}", not cmd.json):
        if store is not None:
            data = store.cached(store.key(name, twist, format_element(w)), compute)
        else:
            data = compute()
    report = ClassPolyReport.model_validate(data)
    if not cmd.json:
        with tree.nested(f"T_{{{report.element.expression}}} in the cocenter"):
            for entry in report.entries:
                tree.info(f"{entry.label.text}: {Colors.BRIGHT_GREEN}{entry.polynomial}{Colors.END}")
    return _finish(cmd, report)


def run_dim(cmd: Command) -> RunResult:
    w, K, prefer = cmd.elements["w"], cmd.args["K"], cmd.args["prefer"]
    calculus = strata_for(cmd.delta)
    b = calculus.invariant_of(cmd.elements["b"])
    want_tree = cmd.args.get("tree") or cmd.dot is not None

    def compute() -> dict:
        dims = calculus.parahoric_stratum_dim(w, K, b) if K else calculus.iwahori_stratum_dim(w, b)
        node = cocenter_for(cmd.delta).reduction_tree(w, b, prefer) if not K else None
        report = DimensionReport.of(w, K, b, cmd.delta, dims, calculus.eta_virtual(w, b), node)
        return report.model_dump(mode="json")

    store = _store(cmd)
    with maybe_step(f"dimension of X_{format_element(w)}", not cmd.json):
        if store is not None:
            kind = f"dim:{format_labels(K)}:{format_element(calculus.straight_representative(b))}:{format_word(prefer)}"
            data = store.cached(store.key(cmd.affine.datum.name, cmd.delta.label, format_element(w), kind), compute)
        else:
            data = compute()
    report = DimensionReport.model_validate(data)
    if not cmd.json:
        color = degree_color(float(report.dimension))
        with tree.nested(f"X_{report.element.expression}(b), b = {invariant_text(b, cmd.affine)}"):
            tree.info(f"dim = {color}{report.dimension}{Colors.END}, "
                      f"{report.irr_max_count} irreducible components of maximal dimension")
            if report.branch_dimensions:
                tree.info(f"reduction branches of dimension {', '.join(report.branch_dimensions)}")
            tree.info(f"virtual dimension {report.virtual_dimension}, eta = {report.eta}, shrunken: {report.shrunken}")
    dot = None
    if want_tree and not K:
        node = cocenter_for(cmd.delta).reduction_tree(w, b, prefer)
        if cmd.args.get("tree") and not cmd.json:
            with tree.nested("reduction tree"):
                tree.reduction_tree(node)
        dot = tree_dot(node)
    if not cmd.args.get("tree"):
        report = report.model_copy(update={"tree": None})
    return _finish(cmd, report, dot=dot)


def run_adm(cmd: Command) -> RunResult:
    adm = strata_for(cmd.delta).admissible_sets(cmd.args["mu"], cmd.args["K"])
    report = AdmissibleReport.of(adm, cmd.affine)
    if not cmd.json:
        with tree.nested(f"Adm({tuple(report.mu)}): {report.size} elements"):
            tree.info(", ".join(report.elements))
            if cmd.args["K"]:
                tree.info(f"K = {report.K}: {len(report.double_cosets)} double cosets, {len(report.ekor)} EKOR pieces")
            (tree.success if report.ekor_identity_holds else tree.error)("EKOR identity")
    return _finish(cmd, report)


def run_bgmu(cmd: Command) -> RunResult:
    mu = cmd.args["mu"]
    calculus = strata_for(cmd.delta)
    with maybe_step(f"B(G, {tuple(mu)})", not cmd.json):
        classes = calculus.bg_mu(mu)
    closure = newton_closure(classes, cmd.delta)
    index = {b: i for i, b in enumerate(closure.elements)}
    report = BgMuReport(group=cmd.affine.datum.name, mu=list(cmd.affine.datum.frame.to_display(mu)),
                        classes=[BgMuClass(invariant=InvariantReport.of(b, cmd.affine), defect=calculus.defect(b),
                                           representative=format_element(calculus.straight_representative(b)))
                                 for b in closure.elements],
                        closure=[[index[a], index[b]] for a, b in closure.hasse])
    if not cmd.json:
        with tree.nested(f"B(G, {tuple(report.mu)}): {len(classes)} classes"):
            for b in closure.elements:
                tree.info(f"{invariant_text(b, cmd.affine)}, defect {calculus.defect(b)}")
    return _finish(cmd, report, dot=poset_dot(closure, partial(invariant_text, group=cmd.affine)))


def _parse_assignments(text: str | None) -> dict[str, str]:
    values = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        name, sep, value = part.partition("=")
        if not sep:
            raise CommandParseError(f"expected name=value, got '{part}'", part)
        values[name.strip()] = value.strip()
    return values


def run_chartable(cmd: Command) -> RunResult:
    table = finite_char_table(cmd.group, _parse_assignments(cmd.args.get("params")), cmd.args.get("equal", False))
    kernel = None
    if cmd.args.get("kernel"):
        kernel = trace_kernel_at(table, _parse_assignments(cmd.args["kernel"]))
    report = CharTableReport.of(table, kernel)
    if not cmd.json:
        with tree.nested(f"character table of H({report.label})"):
            tree.table(["class"] + report.columns, [[row] + entries for row, entries in zip(report.rows, report.entries)])
            tree.info(f"det = {report.determinant_factored}")
            if kernel is not None:
                tree.info(f"trace kernel: {report.kernel}")
    return _finish(cmd, report, csv=char_table_csv(table))


def run_poset(cmd: Command) -> RunResult:
    kind = cmd.args["kind"]
    elements = [w for name, w in cmd.elements.items() if name.startswith("element")]
    render = format_element
    if kind in ("bruhat", "conjugation") and not elements:
        raise DomainError(f"--kind {kind} needs --elements")
    if kind == "bruhat":
        poset = bruhat_poset(elements)
    elif kind == "conjugation":
        poset = partial_conjugation_order(elements, cmd.args["K"], cmd.delta)
    elif kind == "straight":
        bound = cmd.args.get("bound")
        if bound is None:
            raise DomainError("--kind straight needs --bound")
        cmd.budget.check_length(bound)
        invariants = [b for b, _ in conjugacy_for(cmd.delta).straight_classes(bound)]
        poset = straight_class_order(invariants, cmd.delta)
        render = partial(invariant_text, group=cmd.affine)
    else:
        if cmd.args.get("mu") is None:
            raise DomainError("--kind newton needs --mu")
        poset = newton_closure(strata_for(cmd.delta).bg_mu(cmd.args["mu"]), cmd.delta)
        render = partial(invariant_text, group=cmd.affine)
    report = PosetReport.of(poset, render)
    if not cmd.json:
        with tree.nested(f"{kind} order on {len(report.elements)} elements"):
            for a, b in report.hasse:
                tree.info(f"{a} < {b}")
    return _finish(cmd, report, dot=poset_dot(poset, render))


def run_quadruple(cmd: Command) -> RunResult:
    if cmd.args.get("enumerate") is not None:
        bound = cmd.args["enumerate"]
        cmd.budget.check_length(bound)
        with maybe_step(f"classes of length <= {bound}", not cmd.json):
            records = enumerate_classes(cmd.delta, bound)
        report = ClassListReport(group=cmd.affine.datum.name, twist=cmd.delta.label, length_bound=bound,
                                 classes=[ClassKeyReport.of(r, cmd.affine) for r in records])
        if not cmd.json:
            with tree.nested(f"{len(records)} classes met below length {bound}"):
                tree.table(["nu", "kappa", "length", "quadruple"],
                           [[",".join(c.invariant.newton), str(c.invariant.kappa), str(c.min_length), c.label.text]
                            for c in report.classes])
        return _finish(cmd, report)
    w = cmd.elements["w"]
    context = conjugacy_for(cmd.delta)
    quadruples = quadruples_for(cmd.delta)
    minimal = context.reduce_to_minimal(w).terminal
    quadruple = quadruples.standard_quadruple(minimal)
    canonical = quadruples.class_label(minimal)
    report = QuadrupleCommandReport(element=ElementReport.of(w), minimal=ElementReport.of(minimal),
                                    invariant=InvariantReport.of(context.newton_kottwitz(w), cmd.affine),
                                    quadruple=QuadrupleReport.of(quadruple), canonical=QuadrupleReport.of(canonical))
    if not cmd.json:
        with tree.nested(f"class of {format_element(w)}"):
            tree.info(f"minimal representative {report.minimal.expression}")
            tree.info(f"standard quadruple {report.quadruple.text}")
            tree.success(f"canonical label {report.canonical.text}")
    return _finish(cmd, report)


HANDLERS = {
    "describe": run_describe,
    "length": run_length,
    "reduce": run_reduce,
    "classpoly": run_classpoly,
    "dim": run_dim,
    "adm": run_adm,
    "bgmu": run_bgmu,
    "chartable": run_chartable,
    "poset": run_poset,
    "quadruple": run_quadruple,
}


def run(cmd: Command) -> RunResult:
    with timer(cmd.verb), LoggingUtil.Span(cmd.verb):
        return HANDLERS[cmd.verb](cmd)


def execute(argv: list[str]) -> RunResult:
    """Parse and run, mapping the error families to exit codes. Per-twist memos do not outlive the run."""
    logger = logging.getLogger("main")
    try:
        return run(parse_command(argv))
    except (CommandParseError, ExpressionError) as e:
        logger.error(f"{Colors.BRIGHT_RED}Error:{Colors.END} {e}")
        return RunResult("", EXIT_PARSE)
    except DomainError as e:
        logger.error(f"{Colors.BRIGHT_RED}Error:{Colors.END} {e}")
        return RunResult("", EXIT_DOMAIN)
    except ResourceError as e:
        logger.error(f"{Colors.BRIGHT_RED}Budget exceeded:{Colors.END} {e}")
        return RunResult("", EXIT_RESOURCE)
    except ConsistencyError as e:
        logger.error(f"{Colors.BRIGHT_RED}Internal check failed:{Colors.END} {e}")
        return RunResult("", EXIT_CONSISTENCY)
    finally:
        clear_caches()


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    LoggingUtil.initialize_logger(os.getenv("AFFINE_COCENTER_LOG", "./affine_cocenter.log"), verbose="--verbose" in argv)

    logger = logging.getLogger("main")
    logger.debug(f"{Colors.BRIGHT_YELLOW}Invocation:{Colors.END} affine-cocenter {' '.join(argv)}")

    result = execute(argv)
    if result.output:
        sys.stdout.write(result.output)
        sys.stdout.flush()
    return result.exit_code


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logging.getLogger("main").info("\nInterrupted by user")
        sys.exit(1)

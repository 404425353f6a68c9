"""
Machine-readable reports. JSON is the stable contract: pydantic models dumped with sorted keys.
DOT goes through the jinja2 templates in templates/, CSV through csv.writer.
"""
import csv
import io
import json
from pathlib import Path

from pydantic import BaseModel

from affine_weyl import AffineElt, AffineWeylGroup, TwistAuto
from char_tables import CharTable, char_table_det, verify_relations
from conjugacy import ConjInvariant, ReductionTrace, conjugacy_for
from expressions import format_element, format_labels
from fileutils import load_template
from hecke_cocenter import ClassPolyDecomp, MinimalClassKey, ReductionNode, ZeroHeckeClass
from polynomials import format_degree
from posets import Poset
from quadruples import ClassRecord, StandardQuadruple
from root_datum import format_rational
from strata import AdmissibleSets, DimReport, EtaData

TEMPLATE_DIR = Path(__file__).parent / "templates"


class ElementReport(BaseModel):
    expression: str
    word: list[int]
    length: int

    @classmethod
    def of(cls, w: AffineElt) -> "ElementReport":
        word, _ = w.group.reduced_word(w)
        return cls(expression=format_element(w), word=list(word), length=w.group.length(w))


class InvariantReport(BaseModel):
    newton: list[str]
    kappa: list[int]
    basic: bool

    @classmethod
    def of(cls, invariant: ConjInvariant, group: AffineWeylGroup) -> "InvariantReport":
        return cls(newton=invariant.display_newton(group), kappa=list(invariant.kappa),
                   basic=invariant.is_basic(group))


class QuadrupleReport(BaseModel):
    J: str
    x: str
    K: str
    C: str
    text: str

    @classmethod
    def of(cls, quadruple: StandardQuadruple) -> "QuadrupleReport":
        return cls(J=format_labels(quadruple.J), x=format_element(quadruple.x), K=format_labels(quadruple.K),
                   C=format_element(quadruple.C), text=quadruple.describe())


class ClassKeyReport(BaseModel):
    invariant: InvariantReport
    min_length: int
    label: QuadrupleReport
    representative: ElementReport

    @classmethod
    def of(cls, key: MinimalClassKey | ClassRecord, group: AffineWeylGroup) -> "ClassKeyReport":
        return cls(invariant=InvariantReport.of(key.invariant, group), min_length=key.min_length,
                   label=QuadrupleReport.of(key.label), representative=ElementReport.of(key.representative))


class ClassPolyEntry(ClassKeyReport):
    polynomial: str
    coefficients: list[int]
    degree: str

    @classmethod
    def of(cls, key: MinimalClassKey, poly, group: AffineWeylGroup) -> "ClassPolyEntry":
        base = ClassKeyReport.of(key, group)
        return cls(**dict(base), polynomial=str(poly), coefficients=poly.coefficients(),
                   degree=format_degree(poly.degree))


class ClassPolyReport(BaseModel):
    group: str
    twist: str
    element: ElementReport
    entries: list[ClassPolyEntry]

    @classmethod
    def of(cls, decomposition: ClassPolyDecomp, delta: TwistAuto) -> "ClassPolyReport":
        group = delta.group
        return cls(group=group.datum.name, twist=delta.label, element=ElementReport.of(decomposition.element),
                   entries=[ClassPolyEntry.of(key, poly, group) for key, poly in decomposition.sorted_entries()])


class TraceStepReport(BaseModel):
    conjugator: str
    element: str
    length: int


class TraceReport(BaseModel):
    start: ElementReport
    steps: list[TraceStepReport]
    terminal: ElementReport
    strict_descents: int
    invariant: InvariantReport

    @classmethod
    def of(cls, trace: ReductionTrace, delta: TwistAuto) -> "TraceReport":
        invariant = conjugacy_for(delta).newton_kottwitz(trace.start)
        return cls(start=ElementReport.of(trace.start),
                   steps=[TraceStepReport(conjugator=s.conjugator, element=format_element(s.element), length=s.length)
                          for s in trace.steps],
                   terminal=ElementReport.of(trace.terminal), strict_descents=trace.strict_descents,
                   invariant=InvariantReport.of(invariant, delta.group))


class ReductionEdgeReport(BaseModel):
    weight: str
    node: "ReductionNodeReport"


class ReductionNodeReport(BaseModel):
    element: str
    length: int
    degree: str
    polynomial: str
    conjugated: str | None = None
    label: int | None = None
    children: list[ReductionEdgeReport] = []

    @classmethod
    def of(cls, node: ReductionNode) -> "ReductionNodeReport":
        return cls(element=format_element(node.element), length=node.length, degree=format_degree(node.degree),
                   polynomial=str(node.polynomial),
                   conjugated=format_element(node.conjugated) if node.conjugated is not None else None,
                   label=node.label,
                   children=[ReductionEdgeReport(weight=weight, node=cls.of(child)) for weight, child in node.children])


ReductionEdgeReport.model_rebuild()


class DimensionReport(BaseModel):
    group: str
    twist: str
    element: ElementReport
    K: str
    b: InvariantReport
    dimension: str
    irr_max_count: int
    adlv_dimension: str
    polynomial: str
    eta: str
    shrunken: bool
    virtual_dimension: str
    branch_dimensions: list[str] = []
    tree: ReductionNodeReport | None = None

    @classmethod
    def of(cls, w: AffineElt, K, b: ConjInvariant, delta: TwistAuto, dims: DimReport, eta: EtaData,
           tree: ReductionNode | None = None) -> "DimensionReport":
        group = delta.group
        return cls(group=group.datum.name, twist=delta.label, element=ElementReport.of(w), K=format_labels(K),
                   b=InvariantReport.of(b, group), dimension=format_degree(dims.dimension),
                   irr_max_count=dims.irr_max_count, adlv_dimension=format_degree(dims.adlv_dimension),
                   polynomial=str(dims.polynomial), eta="*".join(f"s{s}" for s in group.weyl.word(eta.eta)) or "1",
                   shrunken=eta.shrunken, virtual_dimension=format_rational(eta.virtual_dimension),
                   branch_dimensions=[format_degree(child.degree + 1) for _, child in tree.children] if tree is not None else [],
                   tree=ReductionNodeReport.of(tree) if tree is not None else None)


class DescribeReport(BaseModel):
    group: str
    rank: int
    semisimple_rank: int
    cartan: list[list[int]]
    positive_roots: int
    finite_weyl_order: int
    labels: list[int]
    omega: str
    twist: str
    twist_order: int
    twist_permutation: dict[str, int]
    kottwitz_group: str

    @classmethod
    def of(cls, delta: TwistAuto) -> "DescribeReport":
        group = delta.group
        datum = group.datum
        return cls(group=datum.name, rank=datum.rank, semisimple_rank=datum.semisimple_rank,
                   cartan=[list(row) for row in datum.cartan], positive_roots=len(datum.positive_roots),
                   finite_weyl_order=len(datum.weyl), labels=list(group.labels), omega=datum.describe_omega(),
                   twist=delta.label, twist_order=delta.order,
                   twist_permutation={str(s): t for s, t in delta.permutation},
                   kottwitz_group=delta.kottwitz_lattice().describe())


class LengthReport(BaseModel):
    element: ElementReport
    invariant: InvariantReport
    straight: bool
    minimal_length: int


class AdmissibleReport(BaseModel):
    group: str
    mu: list[int]
    K: str
    size: int
    elements: list[str]
    double_cosets: list[str]
    ekor: list[str]
    ekor_identity_holds: bool

    @classmethod
    def of(cls, adm: AdmissibleSets, group: AffineWeylGroup) -> "AdmissibleReport":
        return cls(group=group.datum.name, mu=list(group.datum.frame.to_display(adm.mu)), K=format_labels(adm.K),
                   size=len(adm.elements), elements=[format_element(w) for w in adm.elements],
                   double_cosets=[format_element(w) for w in adm.double_cosets],
                   ekor=[format_element(w) for w in adm.ekor], ekor_identity_holds=adm.ekor_identity_holds)


class BgMuClass(BaseModel):
    invariant: InvariantReport
    defect: int
    representative: str


class BgMuReport(BaseModel):
    group: str
    mu: list[int]
    classes: list[BgMuClass]
    closure: list[list[int]]


class CharTableReport(BaseModel):
    label: str
    parameters: list[str]
    rows: list[str]
    columns: list[str]
    entries: list[list[str]]
    determinant: str
    determinant_factored: str
    relations_hold: bool
    kernel: list[list[str]] | None = None

    @classmethod
    def of(cls, table: CharTable, kernel=None) -> "CharTableReport":
        det = char_table_det(table)
        return cls(label=table.label, parameters=[str(p) for p in table.parameters], rows=table.row_labels,
                   columns=table.column_labels,
                   entries=[[entry.canonical() for entry in row] for row in table.entries],
                   determinant=det.canonical(), determinant_factored=det.factored(),
                   relations_hold=verify_relations(table),
                   kernel=[[str(c) for c in v] for v in kernel] if kernel is not None else None)


class PosetReport(BaseModel):
    name: str
    elements: list[str]
    hasse: list[list[str]]
    relations: int
    certificates: dict[str, str] = {}

    @classmethod
    def of(cls, poset: Poset, render=format_element) -> "PosetReport":
        return cls(name=poset.name, elements=[render(e) for e in poset.elements],
                   hasse=[[render(a), render(b)] for a, b in poset.hasse], relations=len(poset.relations),
                   certificates={f"{render(a)} <= {render(b)}": format_element(u)
                                 for (a, b), u in sorted(poset.certificates.items(),
                                                         key=lambda item: (poset.elements.index(item[0][0]),
                                                                           poset.elements.index(item[0][1])))})


class QuadrupleCommandReport(BaseModel):
    element: ElementReport
    minimal: ElementReport
    invariant: InvariantReport
    quadruple: QuadrupleReport
    canonical: QuadrupleReport


class ClassListReport(BaseModel):
    group: str
    twist: str
    length_bound: int
    classes: list[ClassKeyReport]


class ZeroHeckeReport(BaseModel):
    support: str
    representative: str
    size: int

    @classmethod
    def of(cls, zero_class: ZeroHeckeClass) -> "ZeroHeckeReport":
        return cls(support=format_labels(zero_class.support), representative=format_element(zero_class.representative),
                   size=len(zero_class.elements))


class ZeroHeckeBasisReport(BaseModel):
    group: str
    twist: str
    K: str
    classes: list[ZeroHeckeReport]


def to_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def invariant_text(invariant: ConjInvariant, group: AffineWeylGroup) -> str:
    return f"nu=({', '.join(invariant.display_newton(group))}), kappa={invariant.kappa}"


def tree_dot(node: ReductionNode) -> str:
    nodes, edges = [], []

    def visit(n: ReductionNode) -> int:
        index = len(nodes)
        nodes.append({"id": index, "word": format_element(n.element), "length": n.length,
                      "degree": format_degree(n.degree)})
        for weight, child in n.children:
            edges.append({"source": index, "target": visit(child), "weight": weight})
        return index

    visit(node)
    return load_template(str(TEMPLATE_DIR / "reduction_tree.dot.j2"), nodes=nodes, edges=edges)


def trace_dot(trace: ReductionTrace) -> str:
    steps = [{"id": 0, "word": format_element(trace.start), "length": trace.start.length}]
    for i, step in enumerate(trace.steps, start=1):
        steps.append({"id": i, "word": format_element(step.element), "length": step.length,
                      "move": step.conjugator})
    return load_template(str(TEMPLATE_DIR / "trace.dot.j2"), steps=steps)


def poset_dot(poset: Poset, render=format_element) -> str:
    index = {e: i for i, e in enumerate(poset.elements)}
    return load_template(str(TEMPLATE_DIR / "poset.dot.j2"), name=poset.name,
                         nodes=[{"id": i, "label": render(e)} for e, i in index.items()],
                         edges=[{"source": index[a], "target": index[b]} for a, b in poset.hasse])


def char_table_csv(table: CharTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["class"] + table.column_labels)
    for label, row in zip(table.row_labels, table.entries):
        writer.writerow([label] + [entry.canonical() for entry in row])
    return buffer.getvalue()

"""
Closure orders: the partial conjugation order on ^K W~, the order on straight classes, and the
Newton closure order on B(G, mu). Every order is returned with its Hasse diagram.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Generic, Hashable, Iterable, Sequence, TypeVar

import networkx as nx

from affine_weyl import AffineElt, TwistAuto
from colors import Colors
from conjugacy import ConjInvariant, conjugacy_for
from errors import ConsistencyError, DomainError
from expressions import format_element
from root_datum import dominance_leq

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)


@dataclass
class Poset(Generic[T]):
    name: str
    elements: list[T]
    relations: set[tuple[T, T]]
    hasse: list[tuple[T, T]]
    certificates: dict[tuple[T, T], AffineElt] = field(default_factory=dict)

    def leq(self, a: T, b: T) -> bool:
        return a == b or (a, b) in self.relations


def hasse_edges(elements: Sequence[T], relation: Callable[[T, T], bool]) -> tuple[set[tuple[T, T]], list[tuple[T, T]]]:
    """Strict relation pairs (closed transitively) and their covering edges, in element order."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(elements)))
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            if i != j and relation(a, b):
                graph.add_edge(i, j)
    if not nx.is_directed_acyclic_graph(graph):
        raise ConsistencyError("relation is not antisymmetric: its graph has a cycle")
    closure = nx.transitive_closure_dag(graph)
    reduced = nx.transitive_reduction(closure)
    relations = {(elements[i], elements[j]) for i, j in closure.edges}
    hasse = sorted(((elements[i], elements[j]) for i, j in reduced.edges),
                   key=lambda e: (elements.index(e[0]), elements.index(e[1])))
    return relations, hasse


def partial_conjugation_order(elements: Iterable[AffineElt], K: Iterable[int], delta: TwistAuto) -> Poset[AffineElt]:
    """w <=_{K,delta} w' iff u w delta(u)^-1 <= w' in Bruhat order for some u in W_K; elements must lie in ^K W~."""
    group = delta.group
    K = frozenset(K)
    context = conjugacy_for(delta)
    elements = sorted(elements, key=group.sort_key)
    for w in elements:
        if not group.is_min_in_left_coset(w, K):
            raise DomainError(f"{format_element(w)} is not minimal in its left W_K-coset")
    parabolic = group.parabolic_elements(K)
    certificates: dict[tuple[AffineElt, AffineElt], AffineElt] = {}

    def related(w: AffineElt, w_prime: AffineElt) -> bool:
        for u in parabolic:
            if group.bruhat_leq(context.conjugate(u, w), w_prime):
                certificates[(w, w_prime)] = u
                return True
        return False

    relations, hasse = hasse_edges(elements, related)
    logger.info(f"Partial conjugation order on {len(elements)} elements: {Colors.BRIGHT_CYAN}{len(hasse)}{Colors.END} covering edges")
    return Poset(f"K={sorted(K)}, delta={delta.label}", elements, relations, hasse, certificates)


def bruhat_poset(elements: Iterable[AffineElt]) -> Poset[AffineElt]:
    elements = list(elements)
    if not elements:
        return Poset("bruhat", [], set(), [])
    group = elements[0].group
    elements = sorted(elements, key=group.sort_key)
    relations, hasse = hasse_edges(elements, group.bruhat_leq)
    return Poset("bruhat", elements, relations, hasse)


def invariant_leq(delta: TwistAuto, b: ConjInvariant, b_prime: ConjInvariant) -> bool:
    return b.kappa == b_prime.kappa and dominance_leq(delta.group.datum, b.newton, b_prime.newton)


def straight_class_order(invariants: Iterable[ConjInvariant], delta: TwistAuto) -> Poset[ConjInvariant]:
    invariants = sorted(invariants, key=lambda b: b.sort_key())
    relations, hasse = hasse_edges(invariants, lambda a, b: invariant_leq(delta, a, b))
    return Poset("straight classes", invariants, relations, hasse)


def minimal_straight_elements(b: ConjInvariant, delta: TwistAuto) -> list[AffineElt]:
    """All elements of length <2rho, nu> with invariant b: the minimal elements of the straight class."""
    group = delta.group
    context = conjugacy_for(delta)
    length = int(b.two_rho_pairing(group))
    window = max((abs(c) for c in b.kappa), default=0) + group.budget.kappa_window
    return [w for w in group.enumerate_by_length(length, window)
            if group.length(w) == length and context.newton_kottwitz(w) == b]


def straight_leq_by_bruhat(delta: TwistAuto, b: ConjInvariant, b_prime: ConjInvariant) -> bool:
    """Some minimal element of [b] lies below some minimal element of [b'] in Bruhat order."""
    group = delta.group
    lower = minimal_straight_elements(b, delta)
    upper = minimal_straight_elements(b_prime, delta)
    return any(group.bruhat_leq(w, w_prime) for w in lower for w_prime in upper)


def newton_closure(bg: Iterable[ConjInvariant], delta: TwistAuto) -> Poset[ConjInvariant]:
    """[b'] meets the closure of [b] iff nu_b' <= nu_b; edges point from b' up to b."""
    bg = sorted(bg, key=lambda b: b.sort_key())
    kappas = {b.kappa for b in bg}
    if len(kappas) > 1:
        raise DomainError("classes of B(G, mu) share one Kottwitz value")
    relations, hasse = hasse_edges(bg, lambda a, b: dominance_leq(delta.group.datum, a.newton, b.newton))
    return Poset("newton closure", bg, relations, hasse)

"""
Class labels for delta-twisted conjugacy classes of W~ by standard quadruples (J, x, K, C).

A minimal element is split as u * x (x straight), conjugated into standard position by the shortest
z in W_0 with z(nu_x) dominant, and the result is minimized over a window of Omega_J and over the
elementary parabolic moves and Omega_J-stabilizer moves. The minimum is the canonical label: two
minimal elements get equal labels exactly when the moves connect them.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable

import networkx as nx

from affine_weyl import AffineElt, AffineRoot, AffineWeylGroup, TwistAuto, generate_subgroup
from colors import Colors
from conjugacy import ConjInvariant, TwistedConjugacy, conjugacy_for
from conjugacy import clear_caches as clear_conjugacy_caches
from errors import ConsistencyError, DomainError, ResourceError, Undecided
from expressions import format_element, format_labels
from root_datum import dominant_representative, pair
from utils.logging_util import LoggingUtil


@dataclass(frozen=True)
class StandardQuadruple:
    J: frozenset[int]
    x: AffineElt
    K: frozenset[int]
    C: AffineElt

    def describe(self) -> str:
        return f"({format_labels(self.J)}, {format_element(self.x)}, {format_labels(self.K)}, {format_element(self.C)})"


@dataclass(frozen=True)
class ClassRecord:
    invariant: ConjInvariant
    min_length: int
    label: StandardQuadruple
    representative: AffineElt


class LeviAffineSystem:
    """The Iwahori-Weyl group W~_J of the standard Levi with simple roots J, inside W~."""

    def __init__(self, group: AffineWeylGroup, J: frozenset[int]):
        self.group = group
        self.J = J
        datum = group.datum
        self.positive_roots = [a for a in datum.positive_roots if datum.support(a) <= J]
        graph = nx.Graph()
        graph.add_nodes_from(J)
        graph.add_edges_from((i, j) for i in J for j in J if i < j and datum.cartan[i - 1][j - 1] != 0)
        components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])

        self.reflections: dict[int, AffineElt] = {j: group.simple_reflections[j] for j in J}
        self.component_labels: list[frozenset[int]] = []
        for c, component in enumerate(components):
            roots = [a for a in self.positive_roots if datum.support(a) <= set(component)]
            theta = max(roots, key=datum.height)
            label = 0 if c == 0 else datum.semisimple_rank + c
            self.reflections[label] = group.reflection(AffineRoot(theta, 1))
            self.component_labels.append(frozenset([label, *component]))
        self.labels = sorted(self.reflections)
        self.label_of: dict[AffineElt, int] = {r: label for label, r in self.reflections.items()}
        self.finite_part = frozenset(group.weyl.parabolic(J))
        self._subgroups: dict[frozenset[int], list[AffineElt]] = {}
        self._omega: dict[int, list[AffineElt]] = {}

    def length(self, w: AffineElt) -> int:
        weyl = self.group.weyl
        u_inv = weyl.inverse(w.finite)
        total = 0
        for alpha in self.positive_roots:
            value = pair(alpha, w.translation)
            flipped = not self.group.datum.is_positive(weyl.act_root(u_inv, alpha))
            total += abs(value - 1) if flipped else abs(value)
        return total

    def contains(self, w: AffineElt) -> bool:
        return w.finite in self.finite_part

    def reduce(self, w: AffineElt) -> tuple[tuple[int, ...], AffineElt]:
        word = []
        current = w
        while True:
            length = self.length(current)
            descent = next((s for s in self.labels
                            if self.length(self.reflections[s] * current) < length), None)
            if descent is None:
                return tuple(word), current
            word.append(descent)
            current = self.reflections[descent] * current

    def is_finite(self, K: Iterable[int]) -> bool:
        K = frozenset(K)
        return not any(component <= K for component in self.component_labels)

    def subgroup(self, K: frozenset[int]) -> list[AffineElt]:
        cached = self._subgroups.get(K)
        if cached is None:
            if not self.is_finite(K):
                raise DomainError(f"W_K for K = {sorted(K)} is infinite")
            cached = generate_subgroup([self.reflections[s] for s in sorted(K)], self.group.identity,
                                       self.group.sort_key)
            self._subgroups[K] = cached
        return cached

    def longest(self, K: frozenset[int]) -> AffineElt:
        return max(self.subgroup(K), key=self.group.length)

    def omega_window(self, radius: int) -> list[AffineElt]:
        """Length-zero parts of t^lambda for lambda in the box |lambda_k| <= radius."""
        cached = self._omega.get(radius)
        if cached is None:
            found = set()
            for lam in product(range(-radius, radius + 1), repeat=self.group.rank):
                found.add(self.reduce(self.group.translation(lam))[1])
            cached = sorted(found, key=self.group.sort_key)
            self._omega[radius] = cached
        return cached


class QuadrupleCalculus:
    def __init__(self, conjugacy: TwistedConjugacy):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.conjugacy = conjugacy
        self.group = conjugacy.group
        self.delta = conjugacy.delta
        self.budget = conjugacy.budget
        self._levis: dict[frozenset[int], LeviAffineSystem] = {}
        self._labels: dict[AffineElt, StandardQuadruple] = {}

    def levi(self, J: frozenset[int]) -> LeviAffineSystem:
        system = self._levis.get(J)
        if system is None:
            system = LeviAffineSystem(self.group, J)
            self._levis[J] = system
        return system

    def standard_quadruple(self, w_min: AffineElt) -> StandardQuadruple:
        group = self.group
        weyl = group.weyl
        triple = self.conjugacy.straight_triple(w_min)
        nu = self.conjugacy.newton_vector(triple.x)
        nu_bar, _ = dominant_representative(group.datum, nu)
        candidates = [g for g in weyl.elements if weyl.act(g, nu) == tuple(nu_bar)]
        z = min(candidates, key=lambda g: (weyl.length(g), weyl.word(g)))
        J = frozenset(j for j, alpha in enumerate(group.datum.simple_roots, start=1)
                      if pair(alpha, nu_bar) == Fraction(0))
        levi = self.levi(J)
        z_elt = group.finite(z)
        z_inv = group.inverse(z_elt)
        x = self.conjugacy.conjugate(z_elt, triple.x)
        if not levi.contains(x) or levi.length(x) != 0:
            raise ConsistencyError(f"{format_element(x)} is not of length zero in the Levi of J = {sorted(J)}")
        K = set()
        for s in triple.K:
            image = z_elt * group.simple_reflections[s] * z_inv
            label = levi.label_of.get(image)
            if label is None:
                raise ConsistencyError(f"z s{s} z^-1 is not a simple reflection of the Levi of J = {sorted(J)}")
            K.add(label)
        return StandardQuadruple(J, x, frozenset(K), z_elt * triple.u * z_inv)

    def _twisted_labels(self, levi: LeviAffineSystem, x: AffineElt) -> dict[int, int]:
        mapping = {}
        x_inv = self.group.inverse(x)
        for s in levi.labels:
            image = x * self.delta(levi.reflections[s]) * x_inv
            label = levi.label_of.get(image)
            if label is None:
                raise ConsistencyError(f"Ad({format_element(x)}) delta does not permute the Levi simple reflections")
            mapping[s] = label
        return mapping

    def _class_minimum(self, levi: LeviAffineSystem, x: AffineElt, K: frozenset[int], u: AffineElt) -> AffineElt:
        x_inv = self.group.inverse(x)
        best = None
        for g in levi.subgroup(K):
            twisted = x * self.delta(g) * x_inv
            candidate = g * u * self.group.inverse(twisted)
            if best is None or self.group.sort_key(candidate) < self.group.sort_key(best):
                best = candidate
        return best

    def _conjugate_labels(self, levi: LeviAffineSystem, d: AffineElt, K: frozenset[int]) -> frozenset[int]:
        d_inv = self.group.inverse(d)
        labels = set()
        for s in K:
            label = levi.label_of.get(d * levi.reflections[s] * d_inv)
            if label is None:
                raise ConsistencyError("conjugated reflection is not simple in the Levi")
            labels.add(label)
        return frozenset(labels)

    def canonical(self, quadruple: StandardQuadruple) -> StandardQuadruple:
        group = self.group
        levi = self.levi(quadruple.J)
        window = levi.omega_window(self.budget.omega_window)
        tau = min(window, key=lambda t: group.sort_key(self.conjugacy.conjugate(t, quadruple.x)))
        x = self.conjugacy.conjugate(tau, quadruple.x)
        tau_inv = group.inverse(tau)
        K = self._conjugate_labels(levi, tau, quadruple.K)
        u = tau * quadruple.C * tau_inv
        twisted = self._twisted_labels(levi, x)
        stabilizers = [t for t in window if t != group.identity and self.conjugacy.conjugate(t, x) == x]

        def state_key(state):
            labels, c = state
            return len(labels), tuple(sorted(labels)), group.sort_key(c)

        start = (K, self._class_minimum(levi, x, K, u))
        seen = {start}
        queue = deque([start])
        while queue:
            labels, c = queue.popleft()
            for s in levi.labels:
                if s in labels:
                    continue
                orbit = {s}
                image = twisted[s]
                while image not in orbit:
                    orbit.add(image)
                    image = twisted[image]
                larger = labels | orbit
                if not levi.is_finite(larger):
                    continue
                d = levi.longest(larger) * levi.longest(labels)
                moved = self._conjugate_labels(levi, d, labels)
                state = (moved, self._class_minimum(levi, x, moved, d * c * group.inverse(d)))
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
            for t in stabilizers:
                moved = self._conjugate_labels(levi, t, labels)
                state = (moved, self._class_minimum(levi, x, moved, t * c * group.inverse(t)))
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
            if len(seen) > self.budget.frontier:
                raise ResourceError("quadruple canonicalization exceeds the frontier budget")
        labels, c = min(seen, key=state_key)
        return StandardQuadruple(quadruple.J, x, labels, c)

    def class_label(self, w_min: AffineElt) -> StandardQuadruple:
        cached = self._labels.get(w_min)
        if cached is not None:
            return cached
        label = self.canonical(self.standard_quadruple(w_min))
        for y in self.conjugacy.level_class(w_min):
            self._labels[y] = label
        self.logger.debug(f"Class of {format_element(w_min)} labelled {Colors.BRIGHT_MAGENTA}{label.describe()}{Colors.END}")
        return label

    def equivalent(self, first: StandardQuadruple, second: StandardQuadruple) -> bool | Undecided:
        if first.J != second.J:
            return False
        if self.conjugacy.newton_kottwitz(first.x) != self.conjugacy.newton_kottwitz(second.x):
            return False
        a, b = self.canonical(first), self.canonical(second)
        if a == b:
            return True
        if a.x != b.x:
            return Undecided(f"straight parts {format_element(a.x)} and {format_element(b.x)} "
                             f"are not related inside the Omega_J window of radius {self.budget.omega_window}")
        return False

    def bounded_search(self, w: AffineElt, target: AffineElt, slack: int | None = None) -> bool | Undecided:
        """Search all simple and Omega conjugations of w with length at most min + slack for target."""
        context = self.conjugacy
        if context.newton_kottwitz(w) != context.newton_kottwitz(target):
            return False
        slack = self.budget.search_slack if slack is None else slack
        group = self.group
        bound = max(group.length(w), group.length(target), context.minimal_length(w) + slack)
        seen = {w}
        queue = deque([w])
        while queue:
            y = queue.popleft()
            if y == target:
                return True
            neighbours = [context.simple_conjugate(s, y) for s in group.labels]
            neighbours += [context.conjugate(t, y) for t in context.omega_moves()]
            for z in neighbours:
                if z not in seen and group.length(z) <= bound:
                    seen.add(z)
                    queue.append(z)
                    if len(seen) > self.budget.frontier:
                        return Undecided("bounded conjugation search hit the frontier budget")
        return Undecided(f"target not reached with length bound {bound}")

    @LoggingUtil.span("enumerate classes")
    def enumerate_classes(self, length_bound: int, kappa_window: int | None = None) -> list[ClassRecord]:
        group = self.group
        records: dict[StandardQuadruple, ClassRecord] = {}
        for w in group.enumerate_by_length(length_bound, kappa_window):
            w_min = self.conjugacy.reduce_to_minimal(w).terminal
            label = self.class_label(w_min)
            current = records.get(label)
            if current is None or group.sort_key(w_min) < group.sort_key(current.representative):
                records[label] = ClassRecord(self.conjugacy.newton_kottwitz(w_min), group.length(w_min), label, w_min)
        self.logger.info(f"Enumerated {Colors.BRIGHT_CYAN}{len(records)}{Colors.END} conjugacy classes "
                         f"meeting length <= {length_bound}")
        return sorted(records.values(), key=lambda r: (r.invariant.sort_key(), r.min_length, group.sort_key(r.representative)))


_calculators: dict[TwistedConjugacy, QuadrupleCalculus] = {}


def quadruples_for(delta: TwistAuto) -> QuadrupleCalculus:
    context = conjugacy_for(delta)
    calculator = _calculators.get(context)
    if calculator is None:
        calculator = QuadrupleCalculus(context)
        _calculators[context] = calculator
    return calculator


def clear_caches():
    _calculators.clear()
    clear_conjugacy_caches()


def standard_quadruple(w_min: AffineElt, delta: TwistAuto) -> StandardQuadruple:
    return quadruples_for(delta).standard_quadruple(w_min)


def class_label(w_min: AffineElt, delta: TwistAuto) -> StandardQuadruple:
    return quadruples_for(delta).class_label(w_min)


def quadruples_equivalent(first: StandardQuadruple, second: StandardQuadruple, delta: TwistAuto) -> bool | Undecided:
    return quadruples_for(delta).equivalent(first, second)


def bounded_conjugacy_search(w: AffineElt, target: AffineElt, delta: TwistAuto, slack: int | None = None) -> bool | Undecided:
    return quadruples_for(delta).bounded_search(w, target, slack)


def enumerate_classes(delta: TwistAuto, length_bound: int, kappa_window: int | None = None) -> list[ClassRecord]:
    return quadruples_for(delta).enumerate_classes(length_bound, kappa_window)

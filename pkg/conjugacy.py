"""
delta-twisted conjugation in W~: Newton points, the Kottwitz map, straightness, reduction to
minimal length, straight parts of minimal elements, defect and partial-conjugation data.
"""
import logging
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from sympy import Matrix

from affine_weyl import AffineElt, AffineWeylGroup, TwistAuto
from budget import Budget
from colors import Colors
from errors import ConsistencyError, DomainError, ResourceError
from expressions import format_element
from root_datum import dominant_representative, format_rational, mat_mul, pair
from utils.logging_util import LoggingUtil


@dataclass(frozen=True)
class ConjInvariant:
    """(dominant Newton point, Kottwitz value). Newton coordinates are internal X_* (x) Q coordinates."""
    newton: tuple[Fraction, ...]
    kappa: tuple[int, ...]

    def two_rho_pairing(self, group: AffineWeylGroup) -> Fraction:
        return Fraction(pair(group.datum.two_rho, self.newton))

    def is_basic(self, group: AffineWeylGroup) -> bool:
        return self.two_rho_pairing(group) == 0

    def display_newton(self, group: AffineWeylGroup) -> list[str]:
        return [format_rational(c) for c in group.datum.frame.to_display(self.newton)]

    def sort_key(self) -> tuple:
        return self.kappa, self.newton

    def __str__(self):
        return f"(nu={tuple(format_rational(c) for c in self.newton)}, kappa={self.kappa})"


@dataclass(frozen=True)
class TraceStep:
    conjugator: str
    element: AffineElt
    length: int


@dataclass(frozen=True)
class ReductionTrace:
    start: AffineElt
    steps: tuple[TraceStep, ...]
    terminal: AffineElt

    @property
    def strict_descents(self) -> int:
        lengths = [self.start.length] + [step.length for step in self.steps]
        return sum(1 for a, b in zip(lengths, lengths[1:]) if b < a)


@dataclass(frozen=True)
class StraightTriple:
    """w ~ u * x with x straight, x minimal in W_K x, Ad(x) delta (K) = K and u in W_K."""
    u: AffineElt
    x: AffineElt
    K: frozenset[int]


@dataclass(frozen=True)
class Descent:
    path: tuple[tuple[str, AffineElt], ...]
    label: int
    conjugated: AffineElt
    lower: AffineElt
    explored: frozenset[AffineElt]


class TwistedConjugacy:
    """All conjugation data of one pair (W~, delta). Caches are per instance and only ever grow."""

    def __init__(self, delta: TwistAuto, budget: Budget | None = None):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.delta = delta
        self.group: AffineWeylGroup = delta.group
        self.datum = self.group.datum
        self.budget = budget or self.group.budget
        self.kottwitz_lattice = delta.kottwitz_lattice()
        self._delta_inverse_tau = self.group.inverse(delta.tau)
        self._omega_moves: list[AffineElt] | None = None
        self._invariants: dict[AffineElt, ConjInvariant] = {}
        self._minimal_classes: dict[AffineElt, frozenset[AffineElt]] = {}
        self._descents: dict[AffineElt, Descent] = {}
        self._triples: dict[AffineElt, StraightTriple] = {}

    # invariants

    def conjugate(self, x: AffineElt, w: AffineElt) -> AffineElt:
        """x * w * delta(x)^-1."""
        group = self.group
        return group.mul(group.mul(x, w), group.inverse(self.delta(x)))

    def newton_vector(self, w: AffineElt) -> tuple[Fraction, ...]:
        """Non-dominant Newton vector xi/n where (w delta)^n = t^xi."""
        group = self.group
        product = group.identity
        factor = w
        cap = self.delta.order * len(group.weyl) * 2
        for n in range(1, cap + 1):
            product = group.mul(product, factor)
            factor = self.delta(factor)
            if n % self.delta.order == 0 and product.finite == group.weyl.identity:
                return tuple(Fraction(c, n) for c in product.translation)
        raise ConsistencyError(f"no power of {format_element(w)} * delta is a translation")

    def kottwitz(self, w: AffineElt) -> tuple[int, ...]:
        return self.kottwitz_lattice.key(w.translation)

    def newton_kottwitz(self, w: AffineElt) -> ConjInvariant:
        cached = self._invariants.get(w)
        if cached is None:
            nu_bar, _ = dominant_representative(self.datum, self.newton_vector(w))
            cached = ConjInvariant(tuple(Fraction(c) for c in nu_bar), self.kottwitz(w))
            if len(self._invariants) < self.budget.memo_entries:
                self._invariants[w] = cached
        return cached

    def is_straight(self, w: AffineElt) -> bool:
        return Fraction(self.group.length(w)) == self.newton_kottwitz(w).two_rho_pairing(self.group)

    # moves

    def omega_moves(self) -> list[AffineElt]:
        if self._omega_moves is None:
            moves = []
            for g in self.group.omega_generators():
                for candidate in (g, self.group.inverse(g)):
                    if candidate not in moves:
                        moves.append(candidate)
            self._omega_moves = moves
        return self._omega_moves

    def simple_conjugate(self, label: int, w: AffineElt) -> AffineElt:
        group = self.group
        s = group.simple_reflections[label]
        return group.mul(group.mul(s, w), group.simple_reflections[self.delta.on_label(label)])

    def level_moves(self, y: AffineElt, rng: random.Random | None = None) -> list[tuple[str, AffineElt]]:
        """Length-preserving moves from y: simple conjugations of equal length, then Omega-conjugations."""
        length = self.group.length(y)
        moves = []
        labels = list(self.group.labels)
        if rng is not None:
            rng.shuffle(labels)
        for s in labels:
            z = self.simple_conjugate(s, y)
            if self.group.length(z) == length:
                moves.append((f"s{s}", z))
        for tau in self.omega_moves():
            moves.append((format_element(tau), self.conjugate(tau, y)))
        return moves

    def find_descent(self, w: AffineElt, rng: random.Random | None = None) -> Descent | None:
        """Breadth-first search of the level set of w for an element with a strictly shorter simple conjugate."""
        if rng is None:
            if w in self._minimal_classes:
                return None
            cached = self._descents.get(w)
            if cached is not None:
                return cached
        group = self.group
        length = group.length(w)
        parents: dict[AffineElt, tuple[AffineElt, str] | None] = {w: None}
        queue = deque([w])
        while queue:
            y = queue.popleft()
            labels = list(group.labels)
            if rng is not None:
                rng.shuffle(labels)
            for s in labels:
                z = self.simple_conjugate(s, y)
                if group.length(z) < length:
                    path = []
                    node = y
                    while parents[node] is not None:
                        previous, move = parents[node]
                        path.append((move, node))
                        node = previous
                    descent = Descent(tuple(reversed(path)), s, y, z, frozenset(parents))
                    if rng is None and len(self._descents) < self.budget.memo_entries:
                        self._descents[w] = descent
                    return descent
            for move, z in self.level_moves(y, rng):
                if z not in parents:
                    parents[z] = (y, move)
                    queue.append(z)
                    if len(parents) > self.budget.frontier:
                        raise ResourceError(f"level set of {format_element(w)} exceeds the frontier budget")
        level = frozenset(parents)
        if len(self._minimal_classes) < self.budget.memo_entries:
            for y in level:
                self._minimal_classes[y] = level
        return None

    def is_minimal(self, w: AffineElt) -> bool:
        return self.find_descent(w) is None

    def level_class(self, w_min: AffineElt) -> list[AffineElt]:
        """The approx-class of a minimal element, sorted."""
        if self.find_descent(w_min) is not None:
            raise DomainError(f"{format_element(w_min)} is not of minimal length in its conjugacy class")
        level = self._minimal_classes.get(w_min)
        if level is None:
            level = frozenset(self._explore_level(w_min))
        return sorted(level, key=self.group.sort_key)

    def _explore_level(self, w: AffineElt) -> set[AffineElt]:
        seen = {w}
        queue = deque([w])
        while queue:
            y = queue.popleft()
            for _, z in self.level_moves(y):
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
                    if len(seen) > self.budget.frontier:
                        raise ResourceError(f"level set of {format_element(w)} exceeds the frontier budget")
        return seen

    def reduce_to_minimal(self, w: AffineElt) -> ReductionTrace:
        group = self.group
        steps: list[TraceStep] = []
        current = w
        while True:
            descent = self.find_descent(current)
            if descent is None:
                break
            for move, element in descent.path:
                steps.append(TraceStep(move, element, group.length(element)))
            steps.append(TraceStep(f"s{descent.label}", descent.lower, group.length(descent.lower)))
            current = descent.lower
        self.logger.debug(f"Reduced {format_element(w)} to {Colors.BRIGHT_GREEN}{format_element(current)}{Colors.END} "
                          f"in {len(steps)} steps")
        return ReductionTrace(w, tuple(steps), current)

    def minimal_length(self, w: AffineElt) -> int:
        return self.group.length(self.reduce_to_minimal(w).terminal)

    # straight parts and partial conjugation

    def label_map(self, x: AffineElt, labels: Iterable[int]) -> dict[int, int | None]:
        """s -> label of x delta(s) x^-1 when that is a simple reflection, else None."""
        group = self.group
        x_inv = group.inverse(x)
        result = {}
        for s in labels:
            image = group.mul(group.mul(x, group.simple_reflections[self.delta.on_label(s)]), x_inv)
            result[s] = group.label_of.get(image)
        return result

    def stabilizes(self, x: AffineElt, K: frozenset[int]) -> bool:
        mapping = self.label_map(x, K)
        return all(image is not None and image in K for image in mapping.values())

    def i_set(self, K: Iterable[int], x: AffineElt) -> frozenset[int]:
        """Largest K' in K with Ad(x) delta (K') = K'."""
        current = frozenset(K)
        if not self.group.is_finite_subset(current):
            raise DomainError(f"W_K for K = {sorted(current)} is infinite")
        while True:
            mapping = self.label_map(x, current)
            kept = frozenset(s for s, image in mapping.items() if image is not None and image in current)
            if kept == current:
                return current
            current = kept

    def _closure(self, x: AffineElt, seed: frozenset[int]) -> frozenset[int]:
        current = set(seed)
        frontier = list(seed)
        while frontier:
            s = frontier.pop()
            image = self.label_map(x, [s])[s]
            if image is None:
                raise ConsistencyError(f"Ad(x) delta does not map s{s} to a simple reflection")
            if image not in current:
                current.add(image)
                frontier.append(image)
        return frozenset(current)

    def candidate_subsets(self) -> list[frozenset[int]]:
        labels = self.group.labels
        return [frozenset(c) for size in range(len(labels) + 1) for c in combinations(labels, size)
                if self.group.is_finite_subset(c)]

    def straight_triple(self, w_min: AffineElt) -> StraightTriple:
        cached = self._triples.get(w_min)
        if cached is not None:
            return cached
        level = self.level_class(w_min)
        group = self.group
        for K in self.candidate_subsets():
            for y in level:
                u, x = group.min_coset_decompose(y, K)
                if not self.stabilizes(x, K) or not self.is_straight(x):
                    continue
                triple = StraightTriple(u, x, self._closure(x, group.support(u)))
                for z in level:
                    self._triples[z] = triple
                return triple
        raise ConsistencyError(f"no straight triple found for {format_element(w_min)}")

    def straight_part(self, w: AffineElt) -> AffineElt:
        return self.straight_triple(self.reduce_to_minimal(w).terminal).x

    def linear_part(self, x: AffineElt):
        """Matrix of the linear part of x o delta on X_*."""
        tau = self.delta.tau.finite.matrix
        return mat_mul(mat_mul(x.finite.matrix, tau), self.delta.varsigma)

    def defect(self, w: AffineElt) -> int:
        x = self.straight_part(w)
        a = Matrix(self.linear_part(x))
        nu = Matrix([[c] for c in self.newton_vector(x)])
        if a * nu != nu:
            raise ConsistencyError(f"Newton vector of {format_element(x)} is not fixed by its linear part")
        return (a - Matrix.eye(self.group.rank)).rank()

    # enumeration

    @LoggingUtil.span("straight classes")
    def straight_classes(self, bound: int, kappa_window: int | None = None) -> list[tuple[ConjInvariant, AffineElt]]:
        found: dict[ConjInvariant, AffineElt] = {}
        for w in self.group.enumerate_by_length(bound, kappa_window):
            if not self.is_straight(w):
                continue
            invariant = self.newton_kottwitz(w)
            if invariant not in found:
                found[invariant] = w
        self.logger.info(f"Found {Colors.BRIGHT_CYAN}{len(found)}{Colors.END} straight classes up to length {bound}")
        return sorted(found.items(), key=lambda item: (item[0].kappa, item[0].two_rho_pairing(self.group), item[0].newton))


_contexts: dict[tuple[int, TwistAuto, Budget], TwistedConjugacy] = {}


def conjugacy_for(delta: TwistAuto, budget: Budget | None = None) -> TwistedConjugacy:
    budget = budget or delta.group.budget
    key = (id(delta.group), delta, budget)
    context = _contexts.get(key)
    if context is None:
        context = TwistedConjugacy(delta, budget)
        _contexts[key] = context
    return context


def clear_caches():
    _contexts.clear()


def newton_kottwitz(w: AffineElt, delta: TwistAuto) -> ConjInvariant:
    return conjugacy_for(delta).newton_kottwitz(w)


def is_straight(w: AffineElt, delta: TwistAuto) -> bool:
    return conjugacy_for(delta).is_straight(w)


def reduce_to_minimal(w: AffineElt, delta: TwistAuto) -> ReductionTrace:
    return conjugacy_for(delta).reduce_to_minimal(w)


def straight_classes(delta: TwistAuto, bound: int, kappa_window: int | None = None) -> list[tuple[ConjInvariant, AffineElt]]:
    return conjugacy_for(delta).straight_classes(bound, kappa_window)


def defect(invariant: ConjInvariant, representative: AffineElt, delta: TwistAuto) -> int:
    context = conjugacy_for(delta)
    if context.newton_kottwitz(representative) != invariant:
        raise DomainError(f"{format_element(representative)} does not lie in the class {invariant}")
    return context.defect(representative)


def i_set(K: Iterable[int], x: AffineElt, delta: TwistAuto) -> frozenset[int]:
    return conjugacy_for(delta).i_set(K, x)

"""
Class polynomials of the (twisted) cocenter of the affine Hecke algebra with equal parameters.

T_w is written in the basis {T_O} of minimal-length classes by the recursion

    F_w = F_w'                                  if w ~ w' by length-preserving conjugation,
    F_w = (q - 1) F_{s w} + q F_{s w delta(s)}  if l(s w delta(s)) < l(w),
    F_w = 1 on the class of w                    if w has minimal length.

Decompositions are keyed by the canonical label of the minimal class, so that several approx-classes
of one conjugacy class collapse to a single key.
"""
import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from affine_weyl import AffineElt, TwistAuto
from colors import Colors
from conjugacy import ConjInvariant, Descent, TwistedConjugacy, conjugacy_for
from errors import DomainError, ResourceError
from expressions import format_element
from polynomials import PolyZq, total
from quadruples import QuadrupleCalculus, StandardQuadruple, enumerate_classes, quadruples_for
from quadruples import clear_caches as clear_quadruple_caches
from utils.logging_util import LoggingUtil


@dataclass(frozen=True)
class MinimalClassKey:
    invariant: ConjInvariant
    min_length: int
    label: StandardQuadruple
    representative: AffineElt = field(compare=False, hash=False)

    def sort_key(self) -> tuple:
        group = self.representative.group
        return self.invariant.sort_key(), self.min_length, group.sort_key(self.representative)


@dataclass(frozen=True)
class ClassPolyDecomp:
    element: AffineElt
    entries: dict[MinimalClassKey, PolyZq]

    def sorted_entries(self) -> list[tuple[MinimalClassKey, PolyZq]]:
        return sorted(self.entries.items(), key=lambda item: item[0].sort_key())

    def value_at_one(self) -> dict[MinimalClassKey, int]:
        return {key: poly.evaluate(1) for key, poly in self.entries.items()}

    def by_invariant(self, invariant: ConjInvariant) -> PolyZq:
        return total(PolyZq.q_power(key.min_length) * poly
                     for key, poly in self.entries.items() if key.invariant == invariant)

    def __eq__(self, other):
        if not isinstance(other, ClassPolyDecomp):
            return NotImplemented
        return self.element == other.element and self.entries == other.entries

    def __hash__(self):
        return hash(self.element)


@dataclass
class ReductionNode:
    element: AffineElt
    length: int
    polynomial: PolyZq
    conjugated: AffineElt | None = None
    label: int | None = None
    children: list[tuple[str, "ReductionNode"]] = field(default_factory=list)

    @property
    def degree(self) -> int | float:
        return self.polynomial.degree

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for _, child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class ZeroHeckeClass:
    support: frozenset[int]
    representative: AffineElt
    elements: tuple[AffineElt, ...]


class HeckeCocenter:
    def __init__(self, conjugacy: TwistedConjugacy, quadruples: QuadrupleCalculus):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.conjugacy = conjugacy
        self.quadruples = quadruples
        self.group = conjugacy.group
        self.delta = conjugacy.delta
        self.budget = conjugacy.budget
        self._memo: dict[AffineElt, dict[MinimalClassKey, PolyZq]] = {}

    def key_of(self, w_min: AffineElt) -> MinimalClassKey:
        label = self.quadruples.class_label(w_min)
        representative = self.conjugacy.level_class(w_min)[0]
        return MinimalClassKey(self.conjugacy.newton_kottwitz(w_min), self.group.length(w_min), label, representative)

    def _remember(self, memo: dict, elements, result: dict):
        for z in elements:
            if len(memo) >= self.budget.memo_entries:
                raise ResourceError(f"class polynomial memo exceeds {self.budget.memo_entries} entries")
            memo[z] = result

    def _decompose(self, w: AffineElt, memo: dict, rng: random.Random | None) -> dict[MinimalClassKey, PolyZq]:
        cached = memo.get(w)
        if cached is not None:
            return cached
        descent = self.conjugacy.find_descent(w, rng)
        if descent is None:
            result = {self.key_of(w): PolyZq.one()}
            self._remember(memo, [w], result)
            return result
        shorter = self.group.simple_reflections[descent.label] * descent.conjugated
        first = self._decompose(shorter, memo, rng)
        second = self._decompose(descent.lower, memo, rng)
        result: dict[MinimalClassKey, PolyZq] = {}
        for key, poly in first.items():
            result[key] = result.get(key, PolyZq.zero()) + PolyZq.q_minus_one() * poly
        for key, poly in second.items():
            result[key] = result.get(key, PolyZq.zero()) + PolyZq.q_power(1) * poly
        result = {key: poly for key, poly in result.items() if not poly.is_zero}
        self._remember(memo, descent.explored, result)
        return result

    def class_poly(self, w: AffineElt, rng: random.Random | None = None) -> ClassPolyDecomp:
        """With an rng, descents are chosen in shuffled order and nothing is shared with the main memo."""
        memo = self._memo if rng is None else {}
        entries = self._decompose(w, memo, rng)
        self.logger.debug(f"Class polynomial of {format_element(w)} has {Colors.BRIGHT_CYAN}{len(entries)}{Colors.END} terms")
        return ClassPolyDecomp(w, dict(entries))

    def class_poly_by_invariant(self, w: AffineElt, invariant: ConjInvariant) -> PolyZq:
        return self.class_poly(w).by_invariant(invariant)

    def _tree_descent(self, w: AffineElt, prefer: Sequence[int]) -> Descent | None:
        length = self.group.length(w)
        for s in prefer:
            lower = self.conjugacy.simple_conjugate(s, w)
            if self.group.length(lower) < length:
                return Descent((), s, w, lower, frozenset({w}))
        return self.conjugacy.find_descent(w)

    def reduction_tree(self, w: AffineElt, invariant: ConjInvariant, prefer: Sequence[int] = ()) -> ReductionNode:
        """
        Deligne-Lusztig reduction of w against one class. Branches stop at nodes whose polynomial
        vanishes. Labels in `prefer` are tried first as direct descents of every node.
        """
        group = self.group
        node = ReductionNode(w, group.length(w), self.class_poly_by_invariant(w, invariant))
        if node.polynomial.is_zero:
            return node
        descent = self._tree_descent(w, prefer)
        if descent is None:
            return node
        node.conjugated = descent.conjugated
        node.label = descent.label
        shorter = group.simple_reflections[descent.label] * descent.conjugated
        node.children.append(("q-1", self.reduction_tree(shorter, invariant, prefer)))
        node.children.append(("q", self.reduction_tree(descent.lower, invariant, prefer)))
        return node

    def zero_hecke_finite(self, labels: frozenset[int]) -> list[ZeroHeckeClass]:
        group = self.group
        if self.delta.on_labels(labels) != labels:
            raise DomainError(f"delta does not stabilize K = {sorted(labels)}")
        elements = group.parabolic_elements(labels)
        assigned: set[AffineElt] = set()
        classes = []
        for w in elements:
            if w in assigned:
                continue
            orbit = {self.conjugacy.conjugate(g, w) for g in elements}
            assigned |= orbit
            shortest = min(group.length(y) for y in orbit)
            minimal = {y for y in orbit if group.length(y) == shortest}
            while minimal:
                start = min(minimal, key=group.sort_key)
                level = {start}
                queue = deque([start])
                while queue:
                    y = queue.popleft()
                    for s in sorted(labels):
                        z = self.conjugacy.simple_conjugate(s, y)
                        if z in minimal and z not in level:
                            level.add(z)
                            queue.append(z)
                minimal -= level
                ordered = tuple(sorted(level, key=group.sort_key))
                classes.append(ZeroHeckeClass(group.support(ordered[0]), ordered[0], ordered))
        return sorted(classes, key=lambda c: group.sort_key(c.representative))

    def zero_hecke_affine(self, length_bound: int, kappa_window: int | None = None) -> list[ZeroHeckeClass]:
        group = self.group
        seen: set[AffineElt] = set()
        classes = []
        for w in group.enumerate_by_length(length_bound, kappa_window):
            if w in seen or not self.conjugacy.is_minimal(w):
                continue
            level = tuple(self.conjugacy.level_class(w))
            seen.update(level)
            classes.append(ZeroHeckeClass(group.support(level[0]), level[0], level))
        return classes

    def default_rigid_bound(self) -> int:
        """Longest element length over maximal proper subsets of S~: elliptic classes of W_K are no longer."""
        group = self.group
        return max(group.length(group.longest_element([s for s in group.labels if s != t])) for t in group.labels)

    @LoggingUtil.span("rigid basis")
    def rigid_basis(self, length_bound: int | None = None, kappa_window: int | None = None) -> list[MinimalClassKey]:
        bound = self.default_rigid_bound() if length_bound is None else length_bound
        keys = []
        for record in enumerate_classes(self.delta, bound, kappa_window):
            if all(c == 0 for c in record.invariant.newton):
                keys.append(MinimalClassKey(record.invariant, record.min_length, record.label, record.representative))
        self.logger.info(f"Rigid cocenter of {self.group.datum.name} has {Colors.BRIGHT_CYAN}{len(keys)}{Colors.END} basis elements")
        return keys


_cocenters: dict[TwistedConjugacy, HeckeCocenter] = {}


def cocenter_for(delta: TwistAuto) -> HeckeCocenter:
    context = conjugacy_for(delta)
    cocenter = _cocenters.get(context)
    if cocenter is None:
        cocenter = HeckeCocenter(context, quadruples_for(delta))
        _cocenters[context] = cocenter
    return cocenter


def clear_caches():
    """Drops every per-twist context together with its memos."""
    _cocenters.clear()
    clear_quadruple_caches()


def class_poly(w: AffineElt, delta: TwistAuto, rng: random.Random | None = None) -> ClassPolyDecomp:
    return cocenter_for(delta).class_poly(w, rng)


def class_poly_by_invariant(w: AffineElt, delta: TwistAuto, invariant: ConjInvariant) -> PolyZq:
    return cocenter_for(delta).class_poly_by_invariant(w, invariant)


def reduction_tree(w: AffineElt, delta: TwistAuto, invariant: ConjInvariant, prefer: Sequence[int] = ()) -> ReductionNode:
    return cocenter_for(delta).reduction_tree(w, invariant, prefer)


def zero_hecke_basis(delta: TwistAuto, labels=None, length_bound: int | None = None,
                     kappa_window: int | None = None) -> list[ZeroHeckeClass]:
    """Finite scope when labels are given, otherwise the affine scope up to length_bound."""
    cocenter = cocenter_for(delta)
    if labels is not None:
        return cocenter.zero_hecke_finite(frozenset(labels))
    if length_bound is None:
        raise ResourceError("the affine 0-Hecke basis is infinite: give a length bound")
    return cocenter.zero_hecke_affine(length_bound, kappa_window)


def rigid_basis(delta: TwistAuto, length_bound: int | None = None, kappa_window: int | None = None) -> list[MinimalClassKey]:
    return cocenter_for(delta).rigid_basis(length_bound, kappa_window)


def degree_bound_holds(decomposition: ClassPolyDecomp) -> bool:
    length = decomposition.element.length
    return all(poly.degree <= length - key.min_length for key, poly in decomposition.entries.items())


def parity_holds(decomposition: ClassPolyDecomp) -> bool:
    """Every surviving power q^k of F_{w,O} is reachable with a (q-1)-steps and b q-steps, a + 2b = l(w) - l(O)."""
    length = decomposition.element.length
    for key, poly in decomposition.entries.items():
        gap = length - key.min_length
        for k, c in enumerate(poly.coefficients()):
            if c and not any(a + 2 * b == gap and k <= a + b for b in range(gap // 2 + 1) for a in [gap - 2 * b]):
                return False
    return True


def specialization_key(decomposition: ClassPolyDecomp) -> MinimalClassKey | None:
    """The unique key with value 1 at q = 1 when all others vanish there."""
    values = decomposition.value_at_one()
    ones = [key for key, value in values.items() if value == 1]
    if len(ones) != 1 or any(value != 0 for key, value in values.items() if key != ones[0]):
        return None
    return ones[0]


"""
Extended affine Weyl group W~ = X_* x| W_0 = W_a x| Omega.

An element t^lambda u acts on the apartment by x -> u(x) - lambda. Affine roots (alpha, k) are the
functions x -> <alpha, x> + k, positive when alpha > 0 and k >= 1 or alpha < 0 and k >= 0; the base
alcove is the one cut out by the positive affine roots. The simple affine roots are (-alpha_i, 0) for
the finite simple roots and (theta_c, 1) for the highest root of every irreducible component.
"""
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from budget import Budget, DEFAULT_BUDGET
from colors import Colors
from errors import DomainError, ResourceError
from lattice_forms import LatticeQuotient
from root_datum import FiniteWeylElt, IntMatrix, RootDatum, Vector, identity_matrix, mat_mul, mat_vec, pair


@dataclass(frozen=True)
class AffineRoot:
    alpha: Vector
    k: int


@dataclass(frozen=True)
class AffineElt:
    """t^translation * finite. Hash and equality ignore the owning group."""
    translation: Vector
    finite: FiniteWeylElt
    group: "AffineWeylGroup" = field(compare=False, repr=False, hash=False)

    def __mul__(self, other: "AffineElt") -> "AffineElt":
        return self.group.mul(self, other)

    def inverse(self) -> "AffineElt":
        return self.group.inverse(self)

    @property
    def length(self) -> int:
        return self.group.length(self)

    def __repr__(self):
        from expressions import format_element
        return f"AffineElt({format_element(self)})"


class AffineWeylGroup:
    def __init__(self, datum: RootDatum, budget: Budget = DEFAULT_BUDGET):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.datum = datum
        self.budget = budget
        self.weyl = datum.weyl
        self.rank = datum.rank
        self.zero: Vector = tuple(0 for _ in range(datum.rank))
        self.identity = AffineElt(self.zero, self.weyl.identity, self)

        self._positive_roots = datum.positive_roots
        self._inverse_flips: list[tuple[bool, ...]] = []
        for u in self.weyl.elements:
            u_inv = self.weyl.inverse(u)
            self._inverse_flips.append(tuple(not datum.is_positive(self.weyl.act_root(u_inv, alpha))
                                             for alpha in self._positive_roots))

        self.labels: list[int] = [0] + list(range(1, datum.semisimple_rank + 1)) + \
            [datum.semisimple_rank + c for c in range(1, len(datum.components))]
        self.simple_affine_roots: dict[int, AffineRoot] = {}
        self.component_labels: list[frozenset[int]] = []
        for c, (component, theta) in enumerate(zip(datum.components, datum.highest_roots)):
            label = 0 if c == 0 else datum.semisimple_rank + c
            self.simple_affine_roots[label] = AffineRoot(theta, 1)
            self.component_labels.append(frozenset([label, *component]))
        for i, alpha in enumerate(datum.simple_roots, start=1):
            self.simple_affine_roots[i] = AffineRoot(tuple(-a for a in alpha), 0)
        self.simple_reflections: dict[int, AffineElt] = {
            label: self.reflection(root) for label, root in self.simple_affine_roots.items()}
        self.label_of: dict[AffineElt, int] = {s: label for label, s in self.simple_reflections.items()}

        self._reduced: dict[AffineElt, tuple[tuple[int, ...], AffineElt]] = {}
        self._bruhat_memo: dict[tuple[AffineElt, AffineElt], bool] = {}
        self._omega_generators: list[AffineElt] | None = None

    # group law

    def element(self, translation: Sequence[int], finite: FiniteWeylElt | None = None) -> AffineElt:
        if len(translation) != self.rank:
            raise DomainError(f"translation {tuple(translation)} does not have {self.rank} coordinates")
        return AffineElt(tuple(translation), finite or self.weyl.identity, self)

    def translation(self, lam: Sequence[int]) -> AffineElt:
        return self.element(lam)

    def finite(self, u: FiniteWeylElt) -> AffineElt:
        return AffineElt(self.zero, u, self)

    def mul(self, a: AffineElt, b: AffineElt) -> AffineElt:
        moved = self.weyl.act(a.finite, b.translation)
        return AffineElt(tuple(x + y for x, y in zip(a.translation, moved)), self.weyl.mul(a.finite, b.finite), self)

    def inverse(self, a: AffineElt) -> AffineElt:
        u_inv = self.weyl.inverse(a.finite)
        return AffineElt(tuple(-x for x in self.weyl.act(u_inv, a.translation)), u_inv, self)

    def product(self, elements: Iterable[AffineElt]) -> AffineElt:
        result = self.identity
        for e in elements:
            result = self.mul(result, e)
        return result

    def from_word(self, word: Iterable[int], tail: AffineElt | None = None) -> AffineElt:
        result = self.identity
        for label in word:
            result = self.mul(result, self.simple_reflection(label))
        return self.mul(result, tail) if tail is not None else result

    def simple_reflection(self, label: int) -> AffineElt:
        try:
            return self.simple_reflections[label]
        except KeyError:
            raise DomainError(f"s{label} is not a simple reflection of {self.datum.name} (labels {self.labels})")

    def reflection(self, root: AffineRoot) -> AffineElt:
        """s_(alpha, k) = t^(k alpha^vee) s_alpha."""
        coroot = self.datum.coroot_of[tuple(root.alpha)]
        matrix = tuple(tuple((1 if a == b else 0) - coroot[a] * root.alpha[b] for b in range(self.rank))
                       for a in range(self.rank))
        return AffineElt(tuple(root.k * c for c in coroot), self.weyl.element_of(matrix), self)

    def act_point(self, w: AffineElt, x: Sequence) -> tuple:
        return tuple(a - b for a, b in zip(self.weyl.act(w.finite, x), w.translation))

    def act_root(self, w: AffineElt, root: AffineRoot) -> AffineRoot:
        moved = self.weyl.act_root(w.finite, root.alpha)
        return AffineRoot(moved, root.k + pair(moved, w.translation))

    def is_positive_root(self, root: AffineRoot) -> bool:
        if self.datum.is_positive(root.alpha):
            return root.k >= 1
        return root.k >= 0

    # length and reduced words

    def length(self, w: AffineElt) -> int:
        flips = self._inverse_flips[w.finite.index]
        total = 0
        for alpha, flipped in zip(self._positive_roots, flips):
            value = pair(alpha, w.translation)
            total += abs(value - 1) if flipped else abs(value)
        return total

    def is_left_descent(self, label: int, w: AffineElt) -> bool:
        return self.length(self.mul(self.simple_reflections[label], w)) < self.length(w)

    def is_right_descent(self, w: AffineElt, label: int) -> bool:
        return self.length(self.mul(w, self.simple_reflections[label])) < self.length(w)

    def left_descents(self, w: AffineElt) -> list[int]:
        return [s for s in self.labels if self.is_left_descent(s, w)]

    def reduced_word(self, w: AffineElt) -> tuple[tuple[int, ...], AffineElt]:
        """Lexicographically first reduced word of w and its length-zero part: w = s_i1 ... s_ik * tau."""
        cached = self._reduced.get(w)
        if cached is not None:
            return cached
        word: list[int] = []
        current = w
        while True:
            descent = next((s for s in self.labels if self.is_left_descent(s, current)), None)
            if descent is None:
                break
            word.append(descent)
            current = self.mul(self.simple_reflections[descent], current)
        result = (tuple(word), current)
        if len(self._reduced) < self.budget.memo_entries:
            self._reduced[w] = result
        return result

    def omega_part(self, w: AffineElt) -> AffineElt:
        return self.reduced_word(w)[1]

    def sort_key(self, w: AffineElt) -> tuple:
        word, tau = self.reduced_word(w)
        return len(word), word, tau.translation, tau.finite.index

    def support(self, w: AffineElt) -> frozenset[int]:
        return frozenset(self.reduced_word(w)[0])

    # Omega and the Kottwitz map of the untwisted group

    def kappa0(self, w: AffineElt) -> Vector:
        return self.datum.coroot_lattice.key(w.translation)

    def same_affine_coset(self, w: AffineElt, w_prime: AffineElt) -> bool:
        return self.kappa0(w) == self.kappa0(w_prime)

    def omega_generators(self) -> list[AffineElt]:
        if self._omega_generators is None:
            found: list[AffineElt] = []
            for k in range(self.rank):
                basis = tuple(1 if i == k else 0 for i in range(self.rank))
                tau = self.omega_part(self.translation(basis))
                if tau != self.identity and tau not in found:
                    found.append(tau)
            self._omega_generators = found
        return self._omega_generators

    def omega_elements(self, window: int | None = None) -> list[AffineElt]:
        """Length-zero elements whose free Kottwitz coordinates lie in [-window, window]."""
        window = self.budget.kappa_window if window is None else window
        moves = []
        for g in self.omega_generators():
            moves.extend([g, self.inverse(g)])
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            current = queue.popleft()
            for g in moves:
                candidate = self.mul(current, g)
                if candidate in seen:
                    continue
                if any(abs(c) > window for c in self.datum.coroot_lattice.free_coordinates(candidate.translation)):
                    continue
                seen.add(candidate)
                queue.append(candidate)
                if len(seen) > self.budget.frontier:
                    raise ResourceError(f"Omega window {window} exceeds the frontier budget")
        return sorted(seen, key=lambda t: (tuple(abs(c) for c in self.kappa0(t)), self.kappa0(t), t.translation, t.finite.index))

    # Bruhat order

    def bruhat_leq(self, w: AffineElt, w_prime: AffineElt) -> bool:
        if self.kappa0(w) != self.kappa0(w_prime):
            return False
        return self._bruhat(w, w_prime)

    def _bruhat(self, w: AffineElt, w_prime: AffineElt) -> bool:
        key = (w, w_prime)
        cached = self._bruhat_memo.get(key)
        if cached is not None:
            return cached
        length, length_prime = self.length(w), self.length(w_prime)
        if length > length_prime:
            result = False
        elif length_prime == 0:
            result = w == w_prime
        else:
            s = next(label for label in self.labels if self.is_left_descent(label, w_prime))
            reflection = self.simple_reflections[s]
            shorter_prime = self.mul(reflection, w_prime)
            moved = self.mul(reflection, w)
            result = self._bruhat(moved if self.length(moved) < length else w, shorter_prime)
        if len(self._bruhat_memo) < self.budget.memo_entries:
            self._bruhat_memo[key] = result
        return result

    # finite parabolic subgroups generated by simple reflections

    def is_finite_subset(self, labels: Iterable[int]) -> bool:
        labels = frozenset(labels)
        return not any(component <= labels for component in self.component_labels)

    def parabolic_elements(self, labels: Iterable[int]) -> list[AffineElt]:
        labels = sorted(labels)
        if not self.is_finite_subset(labels):
            raise DomainError(f"W_K for K = {labels} is infinite")
        return generate_subgroup([self.simple_reflections[s] for s in labels], self.identity, self.sort_key)

    def longest_element(self, labels: Iterable[int]) -> AffineElt:
        return max(self.parabolic_elements(labels), key=self.length)

    def min_coset_decompose(self, w: AffineElt, labels: Iterable[int]) -> tuple[AffineElt, AffineElt]:
        """w = u * x with u in W_K and x in ^K W~ (minimal in W_K w)."""
        labels = sorted(labels)
        u, x = self.identity, w
        while True:
            s = next((label for label in labels if self.is_left_descent(label, x)), None)
            if s is None:
                return u, x
            reflection = self.simple_reflections[s]
            u = self.mul(u, reflection)
            x = self.mul(reflection, x)

    def is_min_in_left_coset(self, w: AffineElt, labels: Iterable[int]) -> bool:
        return not any(self.is_left_descent(s, w) for s in labels)

    # enumeration

    def enumerate_by_length(self, length_bound: int, kappa_window: int | None = None) -> list[AffineElt]:
        self.budget.check_length(length_bound)
        layer = [self.identity]
        affine_part = [self.identity]
        seen = {self.identity}
        for current_length in range(length_bound):
            next_layer = []
            for x in layer:
                for s in self.labels:
                    y = self.mul(self.simple_reflections[s], x)
                    if y not in seen and self.length(y) == current_length + 1:
                        seen.add(y)
                        next_layer.append(y)
            if len(seen) > self.budget.frontier:
                raise ResourceError(f"enumeration up to length {length_bound} exceeds the frontier budget")
            affine_part.extend(next_layer)
            layer = next_layer
        omegas = self.omega_elements(kappa_window)
        result = [self.mul(x, tau) for x in affine_part for tau in omegas]
        if len(result) > self.budget.frontier:
            raise ResourceError(f"enumeration of {len(result)} elements exceeds the frontier budget")
        self.logger.debug(f"Enumerated {Colors.BRIGHT_CYAN}{len(result)}{Colors.END} elements of length <= {length_bound}")
        return sorted(result, key=self.sort_key)

    # twists

    def twist(self, description: str) -> "TwistAuto":
        return TwistAuto.parse(self, description)


def generate_subgroup(generators: Sequence[AffineElt], identity: AffineElt, sort_key, cap: int = 100_000) -> list[AffineElt]:
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = g * s
            if h not in seen:
                seen.add(h)
                queue.append(h)
                if len(seen) > cap:
                    raise ResourceError(f"subgroup generated by {len(generators)} reflections exceeds {cap} elements")
    return sorted(seen, key=sort_key)


TWIST_PATTERN = re.compile(r"^\s*(id|diagram|tau\^(-?\d+)|diagram\s*\*\s*tau\^(-?\d+))\s*$")


@dataclass(frozen=True)
class TwistAuto:
    """delta = Ad(tau) composed with a diagram automorphism varsigma of the based root datum."""
    label: str
    varsigma: IntMatrix
    tau: AffineElt
    group: AffineWeylGroup = field(compare=False, repr=False, hash=False)
    permutation: tuple[tuple[int, int], ...] = field(compare=False, default=())
    order: int = field(compare=False, default=1)

    @classmethod
    def parse(cls, group: AffineWeylGroup, description: str) -> "TwistAuto":
        match = TWIST_PATTERN.match(description)
        if not match:
            raise DomainError(f"unknown twist '{description}': expected id, diagram, tau^k or diagram*tau^k")
        text = match.group(1)
        power = int(match.group(2) or match.group(3) or 0)
        if text.startswith("diagram"):
            w0 = group.weyl.longest.matrix
            varsigma = tuple(tuple(-x for x in row) for row in w0)
        else:
            varsigma = identity_matrix(group.rank)
        tau = group.identity
        if power:
            generators = group.omega_generators()
            if generators:
                base = generators[0] if power > 0 else group.inverse(generators[0])
                for _ in range(abs(power)):
                    tau = group.mul(tau, base)
        return cls.build(group, text.replace(" ", ""), varsigma, tau)

    @classmethod
    def identity(cls, group: AffineWeylGroup) -> "TwistAuto":
        return cls.build(group, "id", identity_matrix(group.rank), group.identity)

    @classmethod
    def build(cls, group: AffineWeylGroup, label: str, varsigma: IntMatrix, tau: AffineElt) -> "TwistAuto":
        if mat_mul(varsigma, varsigma) != identity_matrix(group.rank):
            raise DomainError(f"twist {label}: diagram part must be an involution of X_*")
        if group.length(tau) != 0:
            raise DomainError(f"twist {label}: tau must have length zero")
        draft = cls(label, varsigma, tau, group)
        permutation = []
        for s in group.labels:
            image = draft(group.simple_reflections[s])
            if image not in group.label_of:
                raise DomainError(f"twist {label} does not permute the simple affine reflections (s{s} is not mapped to one)")
            permutation.append((s, group.label_of[image]))
        order = draft._compute_order(dict(permutation))
        return cls(label, varsigma, tau, group, tuple(permutation), order)

    def _compute_order(self, permutation: dict[int, int]) -> int:
        basis = [self.group.translation(tuple(1 if i == k else 0 for i in range(self.group.rank)))
                 for k in range(self.group.rank)]
        images = {s: s for s in permutation}
        translations = list(basis)
        for m in range(1, 1001):
            images = {s: permutation[t] for s, t in images.items()}
            translations = [self(t) for t in translations]
            if all(images[s] == s for s in images) and translations == basis:
                return m
        raise DomainError(f"twist {self.label} has order larger than 1000")

    def _varsigma(self, w: AffineElt) -> AffineElt:
        group = self.group
        translation = mat_vec(self.varsigma, w.translation)
        finite = group.weyl.element_of(mat_mul(mat_mul(self.varsigma, w.finite.matrix), self.varsigma))
        return AffineElt(translation, finite, group)

    def __call__(self, w: AffineElt) -> AffineElt:
        group = self.group
        if self.is_diagram_trivial:
            image = w
        else:
            image = self._varsigma(w)
        if self.tau == group.identity:
            return image
        return group.mul(group.mul(self.tau, image), group.inverse(self.tau))

    @property
    def is_diagram_trivial(self) -> bool:
        return self.varsigma == identity_matrix(self.group.rank)

    @property
    def is_identity(self) -> bool:
        return self.is_diagram_trivial and self.tau == self.group.identity

    def on_label(self, s: int) -> int:
        return dict(self.permutation)[s]

    def on_labels(self, labels: Iterable[int]) -> frozenset[int]:
        mapping = dict(self.permutation)
        return frozenset(mapping[s] for s in labels)

    def act_coweight(self, x: Sequence) -> tuple:
        """Linear part of delta on X_* (x) Q, i.e. the action on Newton points and coweights."""
        return self.group.weyl.act(self.tau.finite, mat_vec(self.varsigma, x))

    def varsigma_coweight(self, x: Sequence) -> tuple:
        return mat_vec(self.varsigma, x)

    def varsigma_simple_index(self, i: int) -> int:
        """Diagram permutation of the finite simple roots."""
        datum = self.group.datum
        image = mat_vec(self.varsigma, datum.simple_coroots[i - 1])
        return datum.simple_coroots.index(image) + 1

    def kottwitz_lattice(self) -> LatticeQuotient:
        rank = self.group.rank
        generators = list(self.group.datum.simple_coroots)
        for k in range(rank):
            column = tuple((1 if i == k else 0) - self.varsigma[i][k] for i in range(rank))
            if any(column):
                generators.append(column)
        return LatticeQuotient(generators, rank)

    def describe(self) -> str:
        return f"{self.label} (order {self.order})"


def average_over_twist(delta: TwistAuto, x: Sequence) -> tuple[Fraction, ...]:
    """Average of x over the varsigma-orbit."""
    orbit = [tuple(Fraction(c) for c in x)]
    current = orbit[0]
    while True:
        current = tuple(Fraction(c) for c in delta.varsigma_coweight(current))
        if current == orbit[0]:
            break
        orbit.append(current)
    return tuple(sum(v[k] for v in orbit) / len(orbit) for k in range(len(x)))


def enumerate_affine_roots(group: AffineWeylGroup, max_level: int) -> list[AffineRoot]:
    return [AffineRoot(alpha, k) for alpha, k in product(group.datum.roots, range(-max_level, max_level + 1))]


def count_inversions(group: AffineWeylGroup, w: AffineElt) -> int:
    """#{positive affine roots a : w^-1(a) < 0}, by brute force over a large enough window of levels."""
    w_inv = group.inverse(w)
    bound = 2 + max((abs(pair(alpha, w.translation)) for alpha in group.datum.positive_roots), default=0)
    count = 0
    for root in enumerate_affine_roots(group, bound):
        if group.is_positive_root(root) and not group.is_positive_root(group.act_root(w_inv, root)):
            count += 1
    return count


def compose(a: AffineElt, b: AffineElt) -> AffineElt:
    if a.group.datum is not b.group.datum:
        raise DomainError(f"cannot compose elements of {a.group.datum.name} and {b.group.datum.name}")
    return a.group.mul(a, b)


def twist_apply(delta: TwistAuto, w: AffineElt) -> AffineElt:
    return delta(w)


def coset_decompose(w: AffineElt, labels: Iterable[int]) -> tuple[AffineElt, AffineElt]:
    """w = u * x with u in W_K, x minimal in W_K w and l(w) = l(u) + l(x)."""
    group = w.group
    labels = frozenset(labels)
    unknown = labels - set(group.labels)
    if unknown:
        raise DomainError(f"labels {sorted(unknown)} are not simple reflections of {group.datum.name}")
    if not group.is_finite_subset(labels):
        raise DomainError(f"W_K for K = {sorted(labels)} is infinite")
    return group.min_coset_decompose(w, labels)

"""
Dimensions and non-emptiness of intersections of Iwahori double cosets (and their parahoric and EKOR
variants) with sigma-conjugacy classes [b], read off from class polynomials, together with the
closed formulas and combinatorial criteria that predict them.

A class [b] is given by its ConjInvariant (dominant Newton point, Kottwitz value).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from affine_weyl import AffineElt, AffineRoot, AffineWeylGroup, TwistAuto, average_over_twist
from colors import Colors
from conjugacy import ConjInvariant, TwistedConjugacy, conjugacy_for
from errors import ConsistencyError, DomainError
from expressions import format_element, format_labels
from hecke_cocenter import HeckeCocenter, cocenter_for
from hecke_cocenter import clear_caches as clear_cocenter_caches
from polynomials import NEG_INFINITY, PolyZq, total
from root_datum import FiniteWeylElt, dominance_leq, dominant_representative, format_rational, mat_mul, pair
from utils.logging_util import LoggingUtil

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StratumQuery:
    w: AffineElt
    K: frozenset[int]
    b: ConjInvariant
    delta: TwistAuto

    def validate(self) -> "StratumQuery":
        group = self.w.group
        if not group.is_finite_subset(self.K):
            raise DomainError(f"W_K for K = {sorted(self.K)} is infinite")
        strata_for(self.delta).straight_representative(self.b)
        return self


@dataclass(frozen=True)
class DimReport:
    dimension: int | float
    irr_max_count: int
    adlv_dimension: int | float
    polynomial: PolyZq

    @property
    def is_empty(self) -> bool:
        return self.dimension == NEG_INFINITY


@dataclass(frozen=True)
class SpecialParahoricDims:
    dim_k_mu_k: int | float
    dim_x_mu: int | float
    nonempty: bool


@dataclass(frozen=True)
class EtaData:
    eta: FiniteWeylElt
    shrunken: bool
    virtual_dimension: Fraction


@dataclass(frozen=True)
class AdmissibleSets:
    mu: tuple[int, ...]
    K: frozenset[int]
    elements: tuple[AffineElt, ...]
    double_cosets: tuple[AffineElt, ...]
    ekor: tuple[AffineElt, ...]
    ekor_identity_holds: bool


@dataclass
class StratumReport:
    query: StratumQuery
    dims: DimReport
    eta: EtaData


class StrataCalculus:
    def __init__(self, cocenter: HeckeCocenter):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.cocenter = cocenter
        self.conjugacy: TwistedConjugacy = cocenter.conjugacy
        self.group: AffineWeylGroup = cocenter.group
        self.datum = self.group.datum
        self.delta = cocenter.delta
        self.budget = cocenter.budget
        self._straight: dict[ConjInvariant, AffineElt] = {}
        rank = self.datum.rank
        self.rho_check = tuple(Fraction(sum(self.datum.coroot_of[a][k] for a in self.datum.positive_roots), 2)
                               for k in range(rank))
        height = 1 + self.datum.max_height()
        self.generic_point = tuple(-c / height for c in self.rho_check)

    # classes

    def invariant_of(self, w: AffineElt) -> ConjInvariant:
        return self.conjugacy.newton_kottwitz(w)

    def straight_representative(self, b: ConjInvariant) -> AffineElt:
        cached = self._straight.get(b)
        if cached is not None:
            return cached
        pairing = b.two_rho_pairing(self.group)
        if pairing.denominator != 1:
            raise DomainError(f"{b} is not the invariant of a straight class: <2rho, nu> = {pairing}")
        window = max((abs(c) for c in b.kappa), default=0) + self.budget.kappa_window
        for invariant, representative in self.conjugacy.straight_classes(int(pairing), window):
            self._straight.setdefault(invariant, representative)
        if b not in self._straight:
            raise DomainError(f"{b} is not the invariant of a straight class of {self.datum.name}")
        return self._straight[b]

    def defect(self, b: ConjInvariant) -> int:
        return self.conjugacy.defect(self.straight_representative(b))

    def _report(self, polynomial: PolyZq, b: ConjInvariant, shift: int = 0) -> DimReport:
        if polynomial.is_zero:
            return DimReport(NEG_INFINITY, 0, NEG_INFINITY, polynomial)
        dimension = polynomial.degree - shift
        pairing = b.two_rho_pairing(self.group)
        return DimReport(dimension, polynomial.leading_coefficient, dimension - int(pairing), polynomial)

    # dimensions from class polynomials

    def iwahori_stratum_dim(self, w: AffineElt, b: ConjInvariant) -> DimReport:
        if self.group.length(w) < b.two_rho_pairing(self.group):
            return self._report(PolyZq.zero(), b)
        return self._report(self.cocenter.class_poly_by_invariant(w, b), b)

    def double_coset(self, w: AffineElt, K: frozenset[int]) -> list[AffineElt]:
        if not self.group.is_finite_subset(K):
            raise DomainError(f"W_K for K = {sorted(K)} is infinite")
        parabolic = self.group.parabolic_elements(K)
        return sorted({u * w * v for u in parabolic for v in parabolic}, key=self.group.sort_key)

    def parahoric_polynomial(self, w: AffineElt, K: frozenset[int], b: ConjInvariant) -> PolyZq:
        return total(self.cocenter.class_poly_by_invariant(y, b) for y in self.double_coset(w, K))

    def parahoric_stratum_dim(self, w: AffineElt, K: frozenset[int], b: ConjInvariant) -> DimReport:
        """Dimension relative to the parahoric: deg F_{w,K,[b]} - l(w_0^K)."""
        polynomial = self.parahoric_polynomial(w, K, b)
        return self._report(polynomial, b, self.group.length(self.group.longest_element(K)))

    def ekor_piece_dim(self, x: AffineElt, K: frozenset[int], b: ConjInvariant) -> DimReport:
        if not self.group.is_finite_subset(K):
            raise DomainError(f"W_K for K = {sorted(K)} is infinite")
        if not self.group.is_min_in_left_coset(x, K):
            raise DomainError(f"{format_element(x)} is not minimal in its left W_K-coset for K = {format_labels(K)}")
        return self.iwahori_stratum_dim(x, b)

    # closed formulas

    def _check_dominant(self, mu: Sequence[int]):
        if not self.datum.is_dominant(mu):
            raise DomainError(f"{tuple(mu)} is not dominant")

    def mu_average(self, mu: Sequence[int]) -> tuple[Fraction, ...]:
        return average_over_twist(self.delta, mu)

    def mazur_nonempty(self, mu: Sequence[int], b: ConjInvariant) -> bool:
        self._check_dominant(mu)
        if self.conjugacy.kottwitz(self.group.translation(mu)) != b.kappa:
            return False
        return dominance_leq(self.datum, b.newton, self.mu_average(mu))

    def special_parahoric_dim(self, mu: Sequence[int], b: ConjInvariant) -> SpecialParahoricDims:
        if not self.mazur_nonempty(mu, b):
            return SpecialParahoricDims(NEG_INFINITY, NEG_INFINITY, False)
        half_defect = Fraction(self.defect(b), 2)
        plus = self.datum.rho_pairing([Fraction(m) + n for m, n in zip(mu, b.newton)]) - half_defect
        minus = self.datum.rho_pairing([Fraction(m) - n for m, n in zip(mu, b.newton)]) - half_defect
        if plus.denominator != 1 or minus.denominator != 1:
            raise ConsistencyError(f"non-integral dimensions {plus}, {minus} for mu = {tuple(mu)}, b = {b}")
        return SpecialParahoricDims(int(plus), int(minus), True)

    def cross_check_mazur(self, mu: Sequence[int], b: ConjInvariant, K: frozenset[int]) -> bool:
        """Compares the (kappa, dominance) criterion with the class polynomial of K t^mu K; raises on mismatch."""
        predicted = self.mazur_nonempty(mu, b)
        actual = not self.parahoric_stratum_dim(self.group.translation(mu), K, b).is_empty
        if predicted != actual:
            raise ConsistencyError(f"Mazur criterion says {predicted}, class polynomials say {actual} "
                                   f"for mu = {tuple(mu)}, b = {b}")
        return actual

    # eta, shrunken chambers, virtual dimension

    def _finite_varsigma(self, x: FiniteWeylElt) -> FiniteWeylElt:
        varsigma = self.delta.varsigma
        return self.group.weyl.element_of(mat_mul(mat_mul(varsigma, x.matrix), varsigma))

    def eta(self, w: AffineElt) -> FiniteWeylElt:
        """eta_delta(w) = eta_varsigma(w tau): w = x t^lambda y with t^lambda y (alcove) antidominant gives y varsigma(x)."""
        weyl = self.group.weyl
        shifted = w * self.delta.tau
        point = self.group.act_point(shifted, self.generic_point)
        _, g = dominant_representative(self.datum, tuple(-c for c in point))
        x = weyl.inverse(g)
        y = weyl.mul(g, shifted.finite)
        return weyl.mul(y, self._finite_varsigma(x))

    def is_shrunken(self, w: AffineElt, shift: Sequence = None) -> bool:
        point = self.group.act_point(w, self.generic_point)
        if shift is not None:
            point = tuple(p - s for p, s in zip(point, shift))
        return not any(-1 < pair(alpha, point) < 0 for alpha in self.datum.positive_roots)

    def very_shrunken(self, w: AffineElt, mu: Sequence[int]) -> bool:
        """Every shift t^{x(mu)} w of the alcove of w is shrunken."""
        weyl = self.group.weyl
        return all(self.is_shrunken(w, weyl.act(x, mu)) for x in weyl.elements)

    def virtual_dimension(self, w: AffineElt, b: ConjInvariant) -> Fraction:
        eta_length = self.group.weyl.length(self.eta(w))
        return Fraction(self.group.length(w) + eta_length - self.defect(b), 2) + self.datum.rho_pairing(b.newton)

    def eta_virtual(self, w: AffineElt, b: ConjInvariant) -> EtaData:
        return EtaData(self.eta(w), self.is_shrunken(w), self.virtual_dimension(w, b))

    def _in_proper_stable_parabolic(self, eta: FiniteWeylElt) -> bool:
        support = set(self.group.weyl.word(eta))
        closure = set(support)
        for i in support:
            closure.add(self.delta.varsigma_simple_index(i))
        return closure != set(range(1, self.datum.semisimple_rank + 1))

    def basic_nonempty(self, w: AffineElt, b: ConjInvariant) -> bool:
        applicable = (self.is_shrunken(w) and b.is_basic(self.group) and len(self.datum.components) == 1)
        if not applicable:
            return not self.iwahori_stratum_dim(w, b).is_empty
        if self.conjugacy.kottwitz(w) != b.kappa:
            return False
        return not self._in_proper_stable_parabolic(self.eta(w))

    def translation_criterion(self, w: AffineElt, mu: Sequence[int]) -> bool:
        self._check_dominant(mu)
        if self.conjugacy.kottwitz(w) != self.conjugacy.kottwitz(self.group.translation(mu)):
            return False
        return self.very_shrunken(w, mu) and not self._in_proper_stable_parabolic(self.eta(w))

    def p_alcove_test(self, w: AffineElt, J: Iterable[int], x: FiniteWeylElt) -> bool:
        J = frozenset(J)
        if frozenset(self.delta.varsigma_simple_index(j) for j in J) != J:
            raise DomainError(f"J = {format_labels(J)} is not stable under the diagram automorphism")
        group = self.group
        weyl = group.weyl
        x_elt = group.finite(x)
        conjugated = self.conjugacy.conjugate(group.inverse(x_elt), w)
        if conjugated.finite not in set(weyl.parabolic(J)):
            return False
        levi_roots = {a for a in self.datum.positive_roots if self.datum.support(a) <= J}
        unipotent = [weyl.act_root(x, a) for a in self.datum.positive_roots if a not in levi_roots]
        window = 1 + max((abs(pair(alpha, w.translation)) for alpha in self.datum.roots), default=0)
        w_inv = group.inverse(w)
        for alpha in unipotent:
            for k in range(-window, window + 1):
                root = AffineRoot(alpha, k)
                if group.is_positive_root(group.act_root(w_inv, root)) and not group.is_positive_root(root):
                    return False
        return True

    # admissible sets and B(G, mu)

    def admissible_sets(self, mu: Sequence[int], K: Iterable[int] = ()) -> AdmissibleSets:
        self._check_dominant(mu)
        K = frozenset(K)
        group = self.group
        weyl = group.weyl
        tops = sorted({group.translation(weyl.act(x, mu)) for x in weyl.elements}, key=group.sort_key)
        bound = group.length(tops[0])
        target = group.kappa0(tops[0])
        window = max((abs(c) for c in group.datum.coroot_lattice.free_coordinates(tops[0].translation)), default=0)
        candidates = [y for y in group.enumerate_by_length(bound, window) if group.kappa0(y) == target]
        elements = tuple(y for y in candidates if any(group.bruhat_leq(y, t) for t in tops))
        parabolic = group.parabolic_elements(K)
        closure = {u * y * v for y in elements for u in parabolic for v in parabolic}
        double_cosets = tuple(sorted({min((u * y * v for u in parabolic for v in parabolic), key=group.sort_key)
                                      for y in elements}, key=group.sort_key))
        ekor = tuple(y for y in elements if group.is_min_in_left_coset(y, K))
        ekor_from_closure = {y for y in closure if group.is_min_in_left_coset(y, K)}
        self.logger.info(f"Adm({tuple(mu)}) has {Colors.BRIGHT_CYAN}{len(elements)}{Colors.END} elements, "
                         f"{len(double_cosets)} W_K double cosets for K = {format_labels(K)}")
        return AdmissibleSets(tuple(mu), K, elements, double_cosets, ekor, ekor_from_closure == set(ekor))

    @LoggingUtil.span("B(G, mu)")
    def bg_mu(self, mu: Sequence[int]) -> list[ConjInvariant]:
        self._check_dominant(mu)
        average = self.mu_average(mu)
        bound = int(pair(self.datum.two_rho, average))
        kappa = self.conjugacy.kottwitz(self.group.translation(mu))
        window = max((abs(c) for c in self.group.kappa0(self.group.translation(mu))), default=0) + self.budget.kappa_window
        result = []
        for invariant, representative in self.conjugacy.straight_classes(bound, window):
            self._straight.setdefault(invariant, representative)
            if invariant.kappa == kappa and dominance_leq(self.datum, invariant.newton, average):
                result.append(invariant)
        self.logger.info(f"B(G, {tuple(mu)}) has {Colors.BRIGHT_CYAN}{len(result)}{Colors.END} classes: "
                         + ", ".join(str(tuple(format_rational(c) for c in b.newton)) for b in result))
        return result

    def report(self, query: StratumQuery) -> StratumReport:
        query.validate()
        if query.K:
            dims = self.parahoric_stratum_dim(query.w, query.K, query.b)
        else:
            dims = self.iwahori_stratum_dim(query.w, query.b)
        return StratumReport(query, dims, self.eta_virtual(query.w, query.b))


_strata: dict[TwistedConjugacy, StrataCalculus] = {}


def strata_for(delta: TwistAuto) -> StrataCalculus:
    context = conjugacy_for(delta)
    calculus = _strata.get(context)
    if calculus is None:
        calculus = StrataCalculus(cocenter_for(delta))
        _strata[context] = calculus
    return calculus


def clear_caches():
    _strata.clear()
    clear_cocenter_caches()


def iwahori_stratum_dim(w: AffineElt, b: ConjInvariant, delta: TwistAuto) -> DimReport:
    return strata_for(delta).iwahori_stratum_dim(w, b)


def parahoric_stratum_dim(w: AffineElt, K: Iterable[int], b: ConjInvariant, delta: TwistAuto) -> DimReport:
    return strata_for(delta).parahoric_stratum_dim(w, frozenset(K), b)


def ekor_piece_dim(x: AffineElt, K: Iterable[int], b: ConjInvariant, delta: TwistAuto) -> DimReport:
    return strata_for(delta).ekor_piece_dim(x, frozenset(K), b)


def special_parahoric_dim(mu: Sequence[int], b: ConjInvariant, delta: TwistAuto) -> SpecialParahoricDims:
    return strata_for(delta).special_parahoric_dim(mu, b)


def eta_virtual(w: AffineElt, b: ConjInvariant, delta: TwistAuto) -> EtaData:
    return strata_for(delta).eta_virtual(w, b)


def p_alcove_test(w: AffineElt, J: Iterable[int], x: FiniteWeylElt, delta: TwistAuto) -> bool:
    return strata_for(delta).p_alcove_test(w, J, x)


def basic_nonempty(w: AffineElt, b: ConjInvariant, delta: TwistAuto) -> bool:
    return strata_for(delta).basic_nonempty(w, b)


def very_shrunken(w: AffineElt, mu: Sequence[int], delta: TwistAuto) -> bool:
    return strata_for(delta).very_shrunken(w, mu)


def translation_criterion(w: AffineElt, mu: Sequence[int], delta: TwistAuto) -> bool:
    return strata_for(delta).translation_criterion(w, mu)


def admissible_sets(mu: Sequence[int], K: Iterable[int], delta: TwistAuto) -> AdmissibleSets:
    return strata_for(delta).admissible_sets(mu, K)


def bg_mu(mu: Sequence[int], delta: TwistAuto) -> list[ConjInvariant]:
    return strata_for(delta).bg_mu(mu)


def mazur_nonempty(mu: Sequence[int], b: ConjInvariant, delta: TwistAuto) -> bool:
    return strata_for(delta).mazur_nonempty(mu, b)

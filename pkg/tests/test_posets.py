import pytest

from conjugacy import newton_kottwitz
from errors import ConsistencyError, DomainError
from expressions import parse_element
from posets import (bruhat_poset, hasse_edges, invariant_leq, newton_closure, partial_conjugation_order,
                    straight_class_order, straight_leq_by_bruhat)
from strata import bg_mu


@pytest.fixture
def s4(groups):
    group = groups("GL4")
    elements = [w for w in group.parabolic_elements({1, 2, 3}) if group.is_min_in_left_coset(w, {3})]
    return group, elements


class TestHasse:
    def test_chain(self):
        relations, hasse = hasse_edges([1, 2, 3], lambda a, b: a < b)
        assert relations == {(1, 2), (1, 3), (2, 3)}
        assert hasse == [(1, 2), (2, 3)]

    def test_cycle(self):
        with pytest.raises(ConsistencyError):
            hasse_edges(["a", "b"], lambda a, b: True)

    def test_single_element(self, groups):
        poset = bruhat_poset([groups("SL3").identity])
        assert poset.hasse == []
        assert poset.relations == set()


class TestPartialConjugation:
    def test_coset_representatives(self, s4):
        _, elements = s4
        assert len(elements) == 12

    def test_untwisted_adds_one_relation(self, s4, twist):
        group, elements = s4
        bruhat = bruhat_poset(elements)
        order = partial_conjugation_order(elements, {3}, twist("GL4"))
        extra = (parse_element(group, "s1 s2 s3"), parse_element(group, "s2 s1 s3 s2"))
        assert set(order.hasse) == set(bruhat.hasse) | {extra}
        assert order.certificates[extra] == group.simple_reflections[3]

    def test_twisted_adds_one_relation(self, s4, twist):
        group, elements = s4
        bruhat = bruhat_poset(elements)
        order = partial_conjugation_order(elements, {3}, twist("GL4", "diagram"))
        extra = (parse_element(group, "s1"), parse_element(group, "s2 s3"))
        assert set(order.hasse) == set(bruhat.hasse) | {extra}

    def test_contains_bruhat(self, s4, twist):
        _, elements = s4
        order = partial_conjugation_order(elements, {3}, twist("GL4"))
        assert bruhat_poset(elements).relations <= order.relations

    def test_rejects_non_minimal(self, groups, twist):
        group = groups("GL4")
        with pytest.raises(DomainError):
            partial_conjugation_order([group.simple_reflections[3]], {3}, twist("GL4"))


class TestClassOrders:
    def test_straight_classes_of_gl3(self, groups, twist):
        delta = twist("GL3")
        classes = bg_mu((1, 0, 0), delta)
        poset = straight_class_order(classes, delta)
        assert len(poset.hasse) == 2
        assert poset.leq(classes[0], classes[2])

    def test_bruhat_formulation_agrees(self, twist):
        delta = twist("GL3")
        classes = bg_mu((1, 0, 0), delta)
        for b in classes:
            for b_prime in classes:
                assert straight_leq_by_bruhat(delta, b, b_prime) == invariant_leq(delta, b, b_prime)

    def test_newton_closure(self, twist):
        delta = twist("GL3")
        classes = bg_mu((1, 0, 0), delta)
        poset = newton_closure(classes, delta)
        assert poset.hasse == [(classes[0], classes[1]), (classes[1], classes[2])]

    def test_newton_closure_single_kappa(self, groups, twist):
        gl3 = groups("GL3")
        delta = twist("GL3")
        mixed = [newton_kottwitz(gl3.identity, delta), newton_kottwitz(gl3.translation((1, 0, 0)), delta)]
        with pytest.raises(DomainError):
            newton_closure(mixed, delta)

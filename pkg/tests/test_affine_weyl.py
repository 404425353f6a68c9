import random

import pytest

from affine_weyl import AffineRoot, AffineWeylGroup, coset_decompose, compose, count_inversions, twist_apply
from errors import DomainError, ResourceError
from expressions import parse_element
from root_datum import preset


class TestGroupLaw:
    def test_simple_reflections_are_involutions(self, groups):
        group = groups("SL3")
        for s in group.labels:
            r = group.simple_reflections[s]
            assert r * r == group.identity
            assert group.length(r) == 1

    def test_inverse(self, groups):
        group = groups("Sp4")
        rng = random.Random(7)
        for w in rng.sample(group.enumerate_by_length(5), 20):
            assert w * w.inverse() == group.identity
            assert group.length(w.inverse()) == group.length(w)

    def test_translation_length(self, groups):
        gl3 = groups("GL3")
        assert gl3.length(gl3.translation((1, 0, 0))) == 2
        assert gl3.length(gl3.translation((1, 1, 0))) == 2
        assert gl3.length(gl3.translation((2, 0, -1))) == 6
        gl2 = groups("GL2")
        assert gl2.length(gl2.translation((1, 0))) == 1

    def test_compose_rejects_other_group(self, groups):
        other = AffineWeylGroup(preset("SL3"))
        with pytest.raises(DomainError):
            compose(groups("SL3").identity, other.identity)


class TestLength:
    def test_length_matches_inversion_count(self, groups):
        for name in ("SL3", "PGL3", "Sp4", "GL2"):
            group = groups(name)
            for w in group.enumerate_by_length(4):
                assert group.length(w) == count_inversions(group, w)

    def test_affine_a2_growth(self, groups):
        group = groups("SL3")
        lengths = [group.length(w) for w in group.enumerate_by_length(4)]
        assert [lengths.count(k) for k in range(5)] == [1, 3, 6, 9, 12]

    def test_affine_a1_growth(self, groups):
        group = groups("SL2")
        assert len(group.enumerate_by_length(6)) == 13

    def test_length_changes_by_one(self, groups):
        group = groups("G2")
        for w in group.enumerate_by_length(4):
            for s in group.labels:
                assert abs(group.length(group.simple_reflections[s] * w) - group.length(w)) == 1

    def test_length_zero_part_of_extended_group(self, groups):
        group = groups("PGL3")
        omegas = group.omega_elements()
        assert len(omegas) == 3
        assert all(group.length(t) == 0 for t in omegas)

    def test_enumeration_respects_budget(self, groups):
        group = groups("SL3")
        with pytest.raises(ResourceError):
            group.enumerate_by_length(group.budget.length_bound + 1)


class TestReducedWords:
    def test_reduced_word_reproduces_element(self, groups):
        group = groups("PGL3")
        for w in group.enumerate_by_length(4):
            word, tau = group.reduced_word(w)
            assert len(word) == group.length(w)
            assert group.from_word(word, tau) == w

    def test_first_letter_is_smallest_left_descent(self, groups):
        group = groups("SL3")
        w = parse_element(group, "s2 s1 s0")
        word, _ = group.reduced_word(w)
        assert word[0] == min(group.left_descents(w))


class TestAffineRoots:
    def test_simple_affine_roots_are_positive(self, groups):
        group = groups("Sp4")
        for root in group.simple_affine_roots.values():
            assert group.is_positive_root(root)

    def test_simple_reflection_negates_its_root(self, groups):
        group = groups("SL3")
        for s, root in group.simple_affine_roots.items():
            image = group.act_root(group.simple_reflections[s], root)
            assert image == AffineRoot(tuple(-a for a in root.alpha), -root.k)


class TestBruhat:
    def test_subword_order(self, groups):
        group = groups("SL2")
        s0, s1 = group.simple_reflections[0], group.simple_reflections[1]
        assert group.bruhat_leq(group.identity, s1 * s0)
        assert group.bruhat_leq(s0, s1 * s0)
        assert group.bruhat_leq(s1 * s0, s1 * s0 * s1)
        assert not group.bruhat_leq(s0 * s1, s1 * s0)
        assert not group.bruhat_leq(s1 * s0 * s1, s1 * s0)

    def test_different_components_are_incomparable(self, groups):
        group = groups("PGL3")
        tau = group.omega_generators()[0]
        assert not group.bruhat_leq(group.identity, tau)

    def test_matches_subword_enumeration(self, groups):
        group = groups("SL3")
        elements = group.enumerate_by_length(3)
        for w_prime in elements:
            word, tau = group.reduced_word(w_prime)
            below = set()
            for mask in range(1 << len(word)):
                sub = [s for k, s in enumerate(word) if mask >> k & 1]
                below.add(group.from_word(sub, tau))
            for w in elements:
                assert group.bruhat_leq(w, w_prime) == (w in below)


class TestTwists:
    def test_diagram_twist_of_sl3(self, twist):
        delta = twist("SL3", "diagram")
        assert delta.order == 2
        assert delta.on_label(0) == 0
        assert delta.on_label(1) == 2
        assert delta.on_label(2) == 1

    def test_tau_twist_of_pgl3(self, twist):
        delta = twist("PGL3", "tau^1")
        assert delta.order == 3
        assert sorted(delta.on_labels([0, 1, 2])) == [0, 1, 2]
        assert delta.on_label(0) != 0

    def test_twist_is_a_length_preserving_automorphism(self, groups, twist):
        group = groups("GL3")
        delta = twist("GL3", "diagram")
        for w in group.enumerate_by_length(3):
            assert group.length(twist_apply(delta, w)) == group.length(w)
            for v in group.enumerate_by_length(1):
                assert delta(w * v) == delta(w) * delta(v)

    def test_unknown_twist(self, groups):
        with pytest.raises(DomainError):
            groups("SL3").twist("flip")


class TestCosets:
    def test_coset_decomposition(self, groups):
        group = groups("SL3")
        K = {1, 2}
        for w in group.enumerate_by_length(4):
            u, x = coset_decompose(w, K)
            assert u * x == w
            assert group.length(u) + group.length(x) == group.length(w)
            assert group.is_min_in_left_coset(x, K)
            assert group.support(u) <= K

    def test_example_decomposition(self, groups):
        group = groups("SL3")
        u, x = coset_decompose(parse_element(group, "s1 s2 s0"), {1})
        assert u == group.simple_reflections[1]
        assert group.length(x) == 2

    def test_infinite_parabolic(self, groups):
        group = groups("SL3")
        with pytest.raises(DomainError):
            coset_decompose(group.identity, {0, 1, 2})
        with pytest.raises(DomainError):
            coset_decompose(group.identity, {7})

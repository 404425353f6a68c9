from collections import deque
from fractions import Fraction

import pytest

from conjugacy import conjugacy_for, defect, is_straight, newton_kottwitz, reduce_to_minimal, straight_classes
from errors import DomainError
from expressions import parse_element


def orbit_minimum(context, w, slack=2):
    """Smallest length met by conjugating w within length(w) + slack."""
    group = context.group
    bound = group.length(w) + slack
    seen = {w}
    queue = deque([w])
    while queue:
        y = queue.popleft()
        neighbours = [context.simple_conjugate(s, y) for s in group.labels]
        neighbours += [context.conjugate(t, y) for t in context.omega_moves()]
        for z in neighbours:
            if z not in seen and group.length(z) <= bound:
                seen.add(z)
                queue.append(z)
    return min(group.length(y) for y in seen)


class TestNewtonKottwitz:
    def test_translation(self, groups, twist):
        sl3 = groups("SL3")
        invariant = newton_kottwitz(parse_element(sl3, "t[1,0,-1]"), twist("SL3"))
        assert invariant.display_newton(sl3) == ["1", "0", "-1"]
        assert invariant.kappa == newton_kottwitz(sl3.identity, twist("SL3")).kappa

    def test_newton_is_dominant(self, groups, twist):
        gl3 = groups("GL3")
        invariant = newton_kottwitz(gl3.translation((0, 1, 0)), twist("GL3"))
        assert invariant.newton == (1, 0, 0)

    def test_length_zero_generator_is_central(self, groups, twist):
        gl3 = groups("GL3")
        tau = gl3.omega_generators()[0]
        invariant = newton_kottwitz(tau, twist("GL3"))
        assert len(set(invariant.newton)) == 1
        assert abs(invariant.newton[0]) == Fraction(1, 3)
        assert invariant.is_basic(gl3)

    def test_kottwitz_separates_components(self, groups, twist):
        gl3 = groups("GL3")
        delta = twist("GL3")
        tau = gl3.omega_generators()[0]
        assert newton_kottwitz(gl3.identity, delta).kappa != newton_kottwitz(tau, delta).kappa
        assert newton_kottwitz(gl3.translation((1, 0, 0)), delta).kappa in (
            newton_kottwitz(tau, delta).kappa, newton_kottwitz(gl3.inverse(tau), delta).kappa)

    def test_invariant_is_class_function(self, groups, twist):
        group = groups("Sp4")
        delta = twist("Sp4")
        context = conjugacy_for(delta)
        for w in group.enumerate_by_length(3):
            for s in group.labels:
                assert context.newton_kottwitz(context.simple_conjugate(s, w)) == context.newton_kottwitz(w)

    def test_superbasic_twist(self, groups, twist):
        pgl3 = groups("PGL3")
        delta = twist("PGL3", "tau^1")
        invariant = newton_kottwitz(pgl3.identity, delta)
        assert invariant.newton == (0, 0)


class TestStraightness:
    def test_translation_is_straight(self, groups, twist):
        sl3 = groups("SL3")
        w = parse_element(sl3, "t[1,0,-1]")
        assert sl3.length(w) == 4
        assert is_straight(w, twist("SL3"))

    def test_reflection_is_not_straight(self, groups, twist):
        assert not is_straight(groups("SL3").simple_reflections[1], twist("SL3"))

    def test_length_zero_is_straight(self, groups, twist):
        gl3 = groups("GL3")
        assert is_straight(gl3.omega_generators()[0], twist("GL3"))

    def test_affine_a1_translation_word(self, groups, twist):
        sl2 = groups("SL2")
        assert is_straight(parse_element(sl2, "s0 s1"), twist("SL2"))
        assert not is_straight(parse_element(sl2, "s1 s0 s1"), twist("SL2"))


class TestReduction:
    @pytest.mark.parametrize("name,description,bound", [
        ("SL3", "id", 4),
        ("SL3", "diagram", 4),
        ("PGL3", "id", 3),
        ("Sp4", "id", 3),
    ])
    def test_minimal_length_matches_orbit_search(self, groups, twist, name, description, bound):
        delta = twist(name, description)
        context = conjugacy_for(delta)
        for w in groups(name).enumerate_by_length(bound):
            assert context.minimal_length(w) == orbit_minimum(context, w)

    def test_trace_is_non_increasing(self, groups, twist):
        group = groups("SL3")
        delta = twist("SL3")
        for w in group.enumerate_by_length(4):
            trace = reduce_to_minimal(w, delta)
            lengths = [trace.start.length] + [step.length for step in trace.steps]
            assert all(b <= a for a, b in zip(lengths, lengths[1:]))
            assert trace.terminal.length == lengths[-1]
            assert newton_kottwitz(trace.terminal, delta) == newton_kottwitz(w, delta)

    def test_reflection_class(self, groups, twist):
        sl2 = groups("SL2")
        trace = reduce_to_minimal(parse_element(sl2, "s1 s0 s1"), twist("SL2"))
        assert trace.terminal.length == 1
        assert trace.strict_descents == 1

    def test_minimal_element_is_fixed(self, groups, twist):
        sl3 = groups("SL3")
        w = parse_element(sl3, "s1 s2")
        trace = reduce_to_minimal(w, twist("SL3"))
        assert trace.steps == ()
        assert trace.terminal == w

    def test_level_class_requires_minimal(self, groups, twist):
        context = conjugacy_for(twist("SL3"))
        with pytest.raises(DomainError):
            context.level_class(parse_element(groups("SL3"), "s1 s2 s1"))

    def test_level_class_of_reflection(self, groups, twist):
        sl3 = groups("SL3")
        context = conjugacy_for(twist("SL3"))
        level = context.level_class(sl3.simple_reflections[1])
        assert sl3.simple_reflections[1] in level
        assert all(sl3.length(y) == 1 for y in level)


class TestStraightClasses:
    def test_affine_a1(self, twist):
        classes = straight_classes(twist("SL2"), 4)
        assert len(classes) == 3

    def test_basic_class_of_sl3(self, groups, twist):
        sl3 = groups("SL3")
        basic = [inv for inv, _ in straight_classes(twist("SL3"), 0)]
        assert len(basic) == 1
        assert basic[0].is_basic(sl3)

    def test_representatives_are_straight(self, twist):
        delta = twist("Sp4")
        for invariant, w in straight_classes(delta, 4):
            assert is_straight(w, delta)
            assert newton_kottwitz(w, delta) == invariant

    def test_gl3_first_component(self, groups, twist):
        gl3 = groups("GL3")
        delta = twist("GL3")
        kappa = newton_kottwitz(gl3.translation((1, 0, 0)), delta).kappa
        found = {tuple(inv.display_newton(gl3)) for inv, _ in straight_classes(delta, 2)
                 if inv.kappa == kappa and inv.two_rho_pairing(gl3) <= 2}
        assert found == {("1/3", "1/3", "1/3"), ("1/2", "1/2", "0"), ("1", "0", "0")}


class TestDefect:
    def test_identity_class(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        assert defect(newton_kottwitz(sl3.identity, delta), sl3.identity, delta) == 0

    def test_superbasic(self, groups, twist):
        gl3 = groups("GL3")
        delta = twist("GL3")
        tau = gl3.omega_generators()[0]
        assert defect(newton_kottwitz(tau, delta), tau, delta) == 2

    def test_translation_class(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        w = parse_element(sl3, "t[1,0,-1]")
        assert defect(newton_kottwitz(w, delta), w, delta) == 0

    def test_wrong_class(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        with pytest.raises(DomainError):
            defect(newton_kottwitz(sl3.identity, delta), parse_element(sl3, "t[1,0,-1]"), delta)


class TestISet:
    def test_identity_keeps_stable_labels(self, groups, twist):
        context = conjugacy_for(twist("SL3"))
        assert context.i_set({1, 2}, groups("SL3").identity) == frozenset({1, 2})

    def test_infinite_parahoric(self, groups, twist):
        context = conjugacy_for(twist("SL3"))
        with pytest.raises(DomainError):
            context.i_set({0, 1, 2}, groups("SL3").identity)

import pytest

from conjugacy import newton_kottwitz
from errors import DomainError
from expressions import parse_element
from polynomials import NEG_INFINITY, PolyZq
from strata import (StratumQuery, admissible_sets, basic_nonempty, bg_mu, ekor_piece_dim, eta_virtual,
                    iwahori_stratum_dim, mazur_nonempty, p_alcove_test, parahoric_stratum_dim,
                    special_parahoric_dim, strata_for, translation_criterion, very_shrunken)
from strata import clear_caches


@pytest.fixture
def gl2(groups, twist):
    group = groups("GL2")
    delta = twist("GL2")
    mu = group.translation((1, 0))
    return group, delta, mu, newton_kottwitz(mu, delta), newton_kottwitz(group.omega_generators()[0], delta)


@pytest.fixture
def gl3(groups, twist):
    group = groups("GL3")
    delta = twist("GL3")
    mu = group.translation((1, 0, 0))
    return group, delta, mu, newton_kottwitz(mu, delta), newton_kottwitz(group.omega_generators()[0], delta)


class TestIwahoriDimensions:
    def test_minimal_straight_element(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        w = parse_element(sl3, "t[1,0,-1]")
        report = iwahori_stratum_dim(w, newton_kottwitz(w, delta), delta)
        assert report.dimension == 4
        assert report.irr_max_count == 1
        assert report.adlv_dimension == 0

    def test_sl4_example(self, groups, twist):
        sl4 = groups("SL4")
        delta = twist("SL4")
        w = parse_element(sl4, "s1 s2 s0 s1 s2 s3 s2 s1 s0 s1")
        report = iwahori_stratum_dim(w, newton_kottwitz(sl4.identity, delta), delta)
        assert report.dimension == 8
        assert report.irr_max_count == 1

    def test_empty_when_too_short(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        b = newton_kottwitz(parse_element(sl3, "t[1,0,-1]"), delta)
        report = iwahori_stratum_dim(sl3.simple_reflections[1], b, delta)
        assert report.is_empty
        assert report.dimension == NEG_INFINITY
        assert report.irr_max_count == 0


class TestParahoricDimensions:
    def test_gl2_ordinary(self, gl2):
        group, delta, mu, ordinary, _ = gl2
        report = parahoric_stratum_dim(mu, {1}, ordinary, delta)
        assert report.polynomial == PolyZq.parse("q**2 + q")
        assert report.dimension == 1

    def test_gl2_basic(self, gl2):
        group, delta, mu, _, basic = gl2
        report = parahoric_stratum_dim(mu, {1}, basic, delta)
        assert report.polynomial == PolyZq.parse("q + 1")
        assert report.dimension == 0

    def test_gl3_superbasic(self, gl3):
        group, delta, mu, _, superbasic = gl3
        report = parahoric_stratum_dim(mu, {1, 2}, superbasic, delta)
        assert report.polynomial.degree == 3
        assert report.dimension == 0

    def test_matches_closed_formula(self, gl3):
        group, delta, mu, ordinary, superbasic = gl3
        for b in (ordinary, superbasic):
            closed = special_parahoric_dim((1, 0, 0), b, delta)
            assert closed.nonempty
            assert parahoric_stratum_dim(mu, {1, 2}, b, delta).dimension == closed.dim_k_mu_k

    def test_infinite_parahoric(self, gl3):
        group, delta, mu, ordinary, _ = gl3
        with pytest.raises(DomainError):
            parahoric_stratum_dim(mu, {0, 1, 2}, ordinary, delta)

    def test_ekor_piece_requires_minimal_coset_element(self, gl3):
        group, delta, _, ordinary, _ = gl3
        with pytest.raises(DomainError):
            ekor_piece_dim(group.simple_reflections[1], {1}, ordinary, delta)


class TestClosedFormulas:
    def test_superbasic_special_parahoric(self, gl3):
        _, delta, _, _, superbasic = gl3
        dims = special_parahoric_dim((1, 0, 0), superbasic, delta)
        assert (dims.dim_k_mu_k, dims.dim_x_mu) == (0, 0)

    def test_ordinary_special_parahoric(self, gl3):
        _, delta, _, ordinary, _ = gl3
        dims = special_parahoric_dim((1, 0, 0), ordinary, delta)
        assert (dims.dim_k_mu_k, dims.dim_x_mu) == (2, 0)

    def test_mazur_rejects_larger_newton_point(self, gl3):
        group, delta, _, _, _ = gl3
        b = newton_kottwitz(group.translation((1, 1, -1)), delta)
        assert not mazur_nonempty((1, 0, 0), b, delta)
        assert not special_parahoric_dim((1, 0, 0), b, delta).nonempty

    def test_mazur_rejects_other_kottwitz_value(self, gl3):
        group, delta, _, _, _ = gl3
        assert not mazur_nonempty((1, 0, 0), newton_kottwitz(group.identity, delta), delta)

    def test_cross_check(self, gl2):
        group, delta, _, ordinary, basic = gl2
        calculus = strata_for(delta)
        assert calculus.cross_check_mazur((1, 0), ordinary, frozenset({1}))
        assert calculus.cross_check_mazur((1, 0), basic, frozenset({1}))

    def test_non_dominant(self, gl3):
        _, delta, _, ordinary, _ = gl3
        with pytest.raises(DomainError):
            mazur_nonempty((0, 1, 0), ordinary, delta)

    @pytest.mark.parametrize("name, mus", [
        ("GL2", [(d, 0) for d in range(7)]),
        ("GL3", [(a, b, 0) for a in range(4) for b in range(a + 1)]),
    ])
    def test_closed_formula_on_small_coweights(self, groups, twist, name, mus):
        group = groups(name)
        delta = twist(name)
        special = frozenset(range(1, group.datum.semisimple_rank + 1))
        calculus = strata_for(delta)
        classes = {b for mu in mus for b in bg_mu(mu, delta)}
        for mu in mus:
            members = set(bg_mu(mu, delta))
            for b in classes:
                closed = special_parahoric_dim(mu, b, delta)
                report = parahoric_stratum_dim(group.translation(mu), special, b, delta)
                assert closed.nonempty == (b in members) == (not report.is_empty)
                assert calculus.cross_check_mazur(mu, b, special) == closed.nonempty
                if closed.nonempty:
                    assert report.dimension == closed.dim_k_mu_k


class TestEta:
    def test_identity(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        data = eta_virtual(sl3.identity, newton_kottwitz(sl3.identity, delta), delta)
        assert data.eta == sl3.weyl.identity
        assert not data.shrunken
        assert data.virtual_dimension == 0

    def test_identity_is_in_basic_locus(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        assert basic_nonempty(sl3.identity, newton_kottwitz(sl3.identity, delta), delta)

    def test_translation_criterion_needs_kottwitz_value(self, gl3):
        group, delta, _, _, _ = gl3
        assert not translation_criterion(group.identity, (1, 0, 0), delta)
        with pytest.raises(DomainError):
            translation_criterion(group.identity, (0, 0, 1), delta)

    def test_base_alcove_is_not_very_shrunken(self, groups, twist):
        sl3 = groups("SL3")
        assert not very_shrunken(sl3.identity, (0, 0), twist("SL3"))

    def test_p_alcove_sign(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        results = {p_alcove_test(parse_element(sl3, text), (), sl3.weyl.identity, delta)
                   for text in ("t[1,0,-1]", "t[-1,0,1]")}
        assert results == {True, False}

    def test_p_alcove_full_levi(self, groups, twist):
        sl3 = groups("SL3")
        assert p_alcove_test(parse_element(sl3, "t[1,0,-1]"), (1, 2), sl3.weyl.identity, twist("SL3"))

    def test_p_alcove_unstable_levi(self, groups, twist):
        sl3 = groups("SL3")
        with pytest.raises(DomainError):
            p_alcove_test(sl3.identity, (1,), sl3.weyl.identity, twist("SL3", "diagram"))


class TestAdmissibleSets:
    def test_gl2(self, groups, twist):
        adm = admissible_sets((1, 0), (), twist("GL2"))
        assert len(adm.elements) == 3
        assert adm.ekor_identity_holds

    def test_gl3(self, groups, twist):
        adm = admissible_sets((1, 0, 0), (), twist("GL3"))
        assert len(adm.elements) == 7
        assert sorted(groups("GL3").length(y) for y in adm.elements) == [0, 1, 1, 1, 2, 2, 2]

    def test_gl3_parahoric(self, twist):
        adm = admissible_sets((1, 0, 0), (1, 2), twist("GL3"))
        assert len(adm.double_cosets) == 2
        assert adm.ekor_identity_holds

    def test_bg_mu(self, gl3):
        group, delta, _, _, _ = gl3
        classes = bg_mu((1, 0, 0), delta)
        assert [tuple(b.display_newton(group)) for b in classes] == [
            ("1/3", "1/3", "1/3"), ("1/2", "1/2", "0"), ("1", "0", "0")]


class TestQuery:
    def test_infinite_parahoric(self, groups, twist):
        sl3 = groups("SL3")
        delta = twist("SL3")
        query = StratumQuery(sl3.identity, frozenset({0, 1, 2}), newton_kottwitz(sl3.identity, delta), delta)
        with pytest.raises(DomainError):
            query.validate()

    def test_report(self, gl2):
        group, delta, mu, ordinary, _ = gl2
        report = strata_for(delta).report(StratumQuery(mu, frozenset({1}), ordinary, delta))
        assert report.dims.dimension == 1


class TestVirtualDimension:
    @pytest.mark.parametrize("name, length_bound", [("SL2", 8), ("SL3", 6)])
    def test_bound_and_equality_on_basic_locus(self, groups, twist, name, length_bound):
        group = groups(name)
        delta = twist(name)
        calculus = strata_for(delta)
        basic = newton_kottwitz(group.identity, delta)
        for w in group.enumerate_by_length(length_bound):
            report = iwahori_stratum_dim(w, basic, delta)
            virtual = calculus.virtual_dimension(w, basic)
            assert report.dimension <= virtual
            if calculus.is_shrunken(w):
                assert basic_nonempty(w, basic, delta) == (not report.is_empty)
                if not report.is_empty:
                    assert report.dimension == virtual


class TestCaches:
    def test_clear_caches_drops_every_layer(self, twist):
        delta = twist("SL2")
        calculus = strata_for(delta)
        calculus.cocenter.class_poly(delta.group.simple_reflections[1])
        clear_caches()
        fresh = strata_for(delta)
        assert fresh is not calculus
        assert fresh.cocenter is not calculus.cocenter
        assert fresh.cocenter.quadruples is not calculus.cocenter.quadruples
        assert fresh.conjugacy is not calculus.conjugacy
        assert strata_for(delta) is fresh

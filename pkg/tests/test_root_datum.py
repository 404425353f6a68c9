from fractions import Fraction

import pytest

from errors import DomainError
from root_datum import dominance_leq, dominant_representative, from_cartan, preset


class TestPresets:
    def test_finite_weyl_orders(self):
        assert len(preset("GL3").weyl) == 6
        assert len(preset("SL4").weyl) == 24
        assert len(preset("Sp4").weyl) == 8
        assert len(preset("G2").weyl) == 12

    def test_positive_roots(self):
        assert len(preset("GL4").positive_roots) == 6
        assert len(preset("SO5").positive_roots) == 4
        assert len(preset("G2").positive_roots) == 6

    def test_two_rho_pairs_to_two_with_simple_coroots(self):
        for name in ("GL3", "SL3", "PGL3", "Sp4", "SO5", "G2"):
            datum = preset(name)
            for coroot in datum.simple_coroots:
                assert sum(a * b for a, b in zip(datum.two_rho, coroot)) == 2

    def test_highest_root_height(self):
        assert preset("SL4").max_height() == 3
        assert preset("Sp4").max_height() == 3
        assert preset("G2").max_height() == 5

    def test_unknown_preset(self):
        with pytest.raises(DomainError):
            preset("E9")
        with pytest.raises(DomainError):
            preset("GL1")

    def test_omega_of_sl_and_pgl(self):
        assert preset("SL3").describe_omega() == "0"
        assert preset("PGL3").describe_omega() == "Z/3"
        assert preset("GL2").describe_omega() == "Z"


class TestCartan:
    def test_rejects_non_finite_type(self):
        with pytest.raises(DomainError):
            from_cartan("affine", [[2, -2], [-2, 2]])

    def test_rejects_bad_diagonal(self):
        with pytest.raises(DomainError):
            from_cartan("bad", [[1, 0], [0, 2]])

    def test_rejects_singular_lattice(self):
        with pytest.raises(DomainError):
            from_cartan("A2", [[2, -1], [-1, 2]], [[1, 0], [1, 0]])

    def test_adjoint_and_simply_connected_agree_on_weyl_group(self):
        sc = from_cartan("A2", [[2, -1], [-1, 2]], "sc")
        ad = from_cartan("A2", [[2, -1], [-1, 2]], "ad")
        assert len(sc.weyl) == len(ad.weyl) == 6
        assert sc.describe_omega() == "0"
        assert ad.describe_omega() == "Z/3"


class TestDominance:
    def test_dominant_representative(self):
        datum = preset("GL3")
        v, u = dominant_representative(datum, (0, 0, 1))
        assert v == (1, 0, 0)
        assert datum.weyl.act(u, (0, 0, 1)) == (1, 0, 0)

    def test_dominance_order(self):
        datum = preset("GL3")
        third = Fraction(1, 3)
        assert dominance_leq(datum, (third, third, third), (1, 0, 0))
        assert not dominance_leq(datum, (1, 0, 0), (third, third, third))
        assert not dominance_leq(datum, (1, 0, 0), (1, 1, 0))

    def test_dominance_requires_dominant_input(self):
        with pytest.raises(DomainError):
            dominance_leq(preset("GL3"), (0, 0, 1), (1, 0, 0))

import pytest

from errors import DomainError
from polynomials import MPoly, NEG_INFINITY, PolyZq, format_degree, parameters, q, total


class TestPolyZq:
    def test_arithmetic(self):
        p = PolyZq.q_minus_one() * PolyZq.q_power(1) + PolyZq.q_power(1)
        assert p == PolyZq.q_power(2)
        assert 1 - PolyZq.one() == 0
        assert (PolyZq.q_minus_one() ** 2).coefficients() == [1, -2, 1]

    def test_zero(self):
        zero = PolyZq.zero()
        assert zero.is_zero
        assert not zero
        assert zero.degree == NEG_INFINITY
        assert zero.coefficients() == []
        assert format_degree(zero.degree) == "-inf"

    def test_degree_and_leading_coefficient(self):
        p = PolyZq.from_coefficients([0, 1, 3])
        assert p.degree == 2
        assert p.leading_coefficient == 3
        assert p.coefficient(1) == 1
        assert p.coefficient(7) == 0

    def test_evaluate(self):
        p = PolyZq.parse("q**2 + q")
        assert p.evaluate(1) == 2
        assert p.evaluate(-1) == 0
        assert p.evaluate(2) == 6

    def test_q_minus_one_expansion(self):
        p = PolyZq.parse("q**2 + q")
        assert p.q_minus_one_coefficients() == [2, 3, 1]
        assert p.is_q_minus_one_positive()
        assert not PolyZq.parse("q - 2").is_q_minus_one_positive()

    def test_parse_round_trip(self):
        p = PolyZq.from_coefficients([1, -2, 0, 5])
        assert PolyZq.parse(str(p)) == p

    @pytest.mark.parametrize("text", ["q/2", "x + 1", "q +", "sqrt(q)"])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            PolyZq.parse(text)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            PolyZq.one().poly = None

    def test_hashable(self):
        assert len({PolyZq.parse("q + 1"), PolyZq.from_coefficients([1, 1])}) == 1

    def test_total(self):
        assert total([PolyZq.one(), PolyZq.q_power(1), PolyZq.q_power(1)]) == PolyZq.parse("2*q + 1")
        assert total([]) == 0


class TestMPoly:
    def test_single_parameter(self):
        assert parameters(1) == (q,)

    def test_canonical_form(self):
        q0, q1 = parameters(2)
        p = MPoly(q1 * q0 + q0 ** 2, (q0, q1))
        assert p == MPoly(q0 ** 2 + q0 * q1, (q0, q1))
        assert p.canonical() == MPoly(q0 * q1 + q0 ** 2, (q0, q1)).canonical()

    def test_factored(self):
        p = MPoly(q ** 3 - 1, (q,))
        assert p.factored() == "(q - 1)*(q**2 + q + 1)"

    def test_substitute(self):
        q0, q1 = parameters(2)
        assert MPoly(q0 * q1 - 1, (q0, q1)).substitute({q0: 2, q1: 3}) == 5

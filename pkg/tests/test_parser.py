from fractions import Fraction

import pytest

from app.core.exceptions import PolynomialParseError, UnsupportedInputError
from app.services.expression_parser import parse_constraint, parse_polynomial
from app.services.poly_core import MultiPoly

x, y = MultiPoly.x(), MultiPoly.y()


class TestParsePolynomial:
    def test_motzkin(self):
        p = parse_polynomial("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1")
        assert p == x**4 * y**2 + x**2 * y**4 - 3 * x**2 * y**2 + 1

    def test_parentheses_and_powers(self):
        assert parse_polynomial("(x*y - 1)^2 + y^2") == (x * y - 1) ** 2 + y**2

    def test_precedence(self):
        assert parse_polynomial("-x^2") == -(x**2)
        assert parse_polynomial("2*x^2*3") == 6 * x**2
        assert parse_polynomial("x - y - 1") == x - y - 1

    def test_rational_and_decimal_literals(self):
        assert parse_polynomial("x/2 + 0.25*y") == Fraction(1, 2) * x + Fraction(1, 4) * y
        assert parse_polynomial("3/4") == MultiPoly.constant(Fraction(3, 4))

    def test_whitespace_is_ignored(self):
        assert parse_polynomial("  x ^ 2 +   y ") == x**2 + y

    def test_printed_form_parses_back(self):
        p = parse_polynomial("x^3 - 3*y^2 + 5/7*x*y")
        assert parse_polynomial(str(p)) == p

    @pytest.mark.parametrize(
        "text",
        ["", "   ", "x^", "x + * y", "x y", "xy", "x^y", "x^-1", "x/y", "x/0", "(x + 1", "x $ y"],
    )
    def test_malformed_input(self, text):
        with pytest.raises(PolynomialParseError) as exc_info:
            parse_polynomial(text)
        assert exc_info.value.exit_code == 2

    @pytest.mark.parametrize("text", ["x*z", "z^2 + 1", "x + w"])
    def test_third_variable_is_unsupported(self, text):
        with pytest.raises(UnsupportedInputError) as exc_info:
            parse_polynomial(text)
        assert exc_info.value.exit_code == 3


class TestParseConstraint:
    def test_bare_polynomial(self):
        assert parse_constraint("x^2 + y^2 - 1") == x**2 + y**2 - 1

    def test_equation_moves_everything_left(self):
        assert parse_constraint("y = x^2") == y - x**2

    @pytest.mark.parametrize("text", ["x >= 0", "x^2 + y^2 < 1", "y ≤ x"])
    def test_inequalities_are_unsupported(self, text):
        with pytest.raises(UnsupportedInputError):
            parse_constraint(text)

    def test_two_equal_signs(self):
        with pytest.raises(PolynomialParseError):
            parse_constraint("x = y = 1")

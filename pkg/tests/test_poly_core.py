from fractions import Fraction

import pytest

from app.core.exceptions import DegenerateInputError
from app.services.poly_core import (
    X,
    Y,
    MultiPoly,
    UniPoly,
    bivariate_gcd,
    divides,
    format_fraction,
    isolate_real_roots,
    parse_rational,
    resultant,
    root_bound,
    squarefree_part,
    sturm_count,
)

x, y = MultiPoly.x(), MultiPoly.y()


class TestUniPoly:
    def test_coefficients_highest_first(self):
        p = UniPoly.from_coefficients([1, 0, -2])
        assert p.degree == 2
        assert p.coefficients == [1, 0, -2]
        assert p.evaluate(Fraction(3, 2)) == Fraction(1, 4)

    def test_squarefree_part_drops_multiplicity(self):
        p = UniPoly.from_coefficients([1, -2, 1])
        assert p.squarefree_part().degree == 1

    def test_real_roots_are_isolated(self):
        p = UniPoly.from_coefficients([1, 0, -2])
        intervals = p.real_roots()
        assert len(intervals) == 2
        lo, hi = intervals
        assert lo.hi < 0 < hi.lo

    def test_rational_roots_come_back_exact(self):
        p = UniPoly.from_coefficients([2, -1])
        [interval] = p.real_roots()
        assert interval.exact
        assert interval.lo == Fraction(1, 2)


class TestMultiPoly:
    def test_arithmetic_and_equality(self):
        p = (x - y) ** 2
        assert p == x**2 - 2 * x * y + y**2
        assert p.total_degree == 2
        assert p.degree(X) == 2

    def test_string_form_is_parseable_grammar(self):
        p = x**4 * y**2 - Fraction(3, 2) * x + 1
        assert str(p) == "x^4*y^2 - 3/2*x + 1"

    def test_normalized_has_integer_content_and_positive_lead(self):
        p = (-Fraction(1, 2) * x**2 + Fraction(3, 4) * y).normalized()
        assert p == 2 * x**2 - 3 * y

    def test_constant_value(self):
        assert (x * y + 7).constant_value == 7
        assert MultiPoly.constant(Fraction(5, 3)).is_constant

    def test_swap_and_shear(self):
        p = x**2 + y
        assert p.swap() == y**2 + x
        assert p.shear(1) == (x + y) ** 2 + y

    def test_specializations(self):
        p = x**2 * y + 3 * y
        assert p.at_x(1).coefficients == [4, 0]
        assert p.at_y(2).coefficients == [2, 0, 6]

    def test_evaluate_exact_and_float(self):
        p = x**3 - 3 * y**2
        assert p.evaluate(-2, 1) == -11
        assert p.evaluate_float(-2.0, 1.0) == pytest.approx(-11.0)


class TestEliminationHelpers:
    def test_resultant_of_circle_and_diagonal(self):
        r = resultant(x**2 + y**2 - 1, x - y, eliminate=Y)
        assert r.degree == 2
        assert sturm_count(r, -1, 1) == 2
        assert r.evaluate(0) != 0

    def test_squarefree_part_of_product(self):
        p = x**2 * (x + y) ** 3
        assert squarefree_part(p) == (x**2 + x * y).normalized()

    def test_squarefree_part_of_zero_is_degenerate(self):
        with pytest.raises(DegenerateInputError):
            squarefree_part(MultiPoly.zero())

    def test_gcd_and_divisibility(self):
        g = bivariate_gcd(x**2 - y**2, x**2 + 2 * x * y + y**2)
        assert g.normalized() == x + y
        assert divides(x + y, x**2 - y**2)
        assert not divides(x + y, x**2 + y**2)

    def test_isolated_roots_are_sorted_and_separated(self):
        p = UniPoly.from_coefficients([1, 0, -5, 0, 6])  # (t^2 - 2)(t^2 - 3)
        intervals = isolate_real_roots(p)
        assert len(intervals) == 4
        assert all(a.hi < b.lo for a, b in zip(intervals, intervals[1:]))
        assert all(sturm_count(p, iv.lo, iv.hi) == 1 for iv in intervals)
        assert intervals[1].hi <= 0 <= intervals[2].lo

    def test_isolation_edge_cases(self):
        assert isolate_real_roots(UniPoly.constant(3)) == []
        assert isolate_real_roots(UniPoly.from_coefficients([1, 0, 1])) == []
        with pytest.raises(DegenerateInputError):
            isolate_real_roots(UniPoly.constant(0))

    def test_sturm_count_counts_endpoint_roots(self):
        p = UniPoly.from_coefficients([1, 0, -1])
        assert sturm_count(p, -1, 1) == 2
        assert sturm_count(p, 0, Fraction(1, 2)) == 0

    def test_root_bound_encloses_roots(self):
        p = UniPoly.from_coefficients([1, -10, 0, 3])
        bound = root_bound(p)
        assert all(-bound < iv.lo and iv.hi < bound for iv in p.real_roots())


class TestRationalText:
    @pytest.mark.parametrize(
        "text,expected",
        [("3", Fraction(3)), ("-7/2", Fraction(-7, 2)), ("0.25", Fraction(1, 4)), (" 1/3 ", Fraction(1, 3))],
    )
    def test_parse_rational(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["abc", "1/0", "", "x"])
    def test_parse_rational_rejects(self, text):
        assert parse_rational(text) is None

    def test_format_fraction(self):
        assert format_fraction(Fraction(-3, 2)) == "-3/2"
        assert format_fraction(Fraction(4)) == "4"

import math
from fractions import Fraction

import pytest

from app.services.algebraic_numbers import RealAlgebraic, Sign
from app.services.number_fields import NumberField, real_roots
from app.services.poly_core import UniPoly


@pytest.fixture(scope="module")
def q_sqrt2():
    root = RealAlgebraic.roots_of(UniPoly.from_coefficients([1, 0, -2]))[1]
    return NumberField(root)


class TestNumberField:
    def test_rational_generator_gives_the_rationals(self):
        field = NumberField(RealAlgebraic.from_rational(3))
        assert field.is_rational_field
        assert field.degree == 1

    def test_generator_squares_to_two(self, q_sqrt2):
        theta = q_sqrt2.theta
        assert q_sqrt2.as_rational(q_sqrt2.mul(theta, theta)) == 2
        assert q_sqrt2.as_rational(theta) is None

    def test_elements_from_coefficients(self, q_sqrt2):
        e = q_sqrt2.from_coefficients([1, 1])
        assert q_sqrt2.coefficient_list(e) == [Fraction(1), Fraction(1)]
        assert q_sqrt2.to_float(e) == pytest.approx(1 + math.sqrt(2))

    def test_division_and_sign(self, q_sqrt2):
        e = q_sqrt2.from_coefficients([1, -2])
        inverse = q_sqrt2.div(q_sqrt2.one, e)
        assert q_sqrt2.as_rational(q_sqrt2.mul(inverse, e)) == 1
        assert q_sqrt2.sign(e) == -1

    def test_exact_real_value(self, q_sqrt2):
        e = q_sqrt2.from_coefficients([3, 0])
        value = q_sqrt2.to_real_algebraic(e)
        assert value.defining.degree == 2
        assert value.to_float() == pytest.approx(3 * math.sqrt(2))


class TestRealRoots:
    def test_irrational_roots_extend_the_rationals(self):
        field = NumberField.rationals()
        roots = real_roots(field, [field.rational(1), field.zero, field.rational(-2)])
        assert [r.value.to_float() for r in roots] == pytest.approx([-math.sqrt(2), math.sqrt(2)])
        assert all(r.field.degree == 2 for r in roots)

    def test_rational_roots_keep_the_field(self):
        field = NumberField.rationals()
        roots = real_roots(field, [field.rational(1), field.rational(-3), field.rational(2)])
        assert [r.value for r in roots] == [1, 2]
        assert all(r.field is field for r in roots)

    def test_roots_inside_an_extension_are_linear(self, q_sqrt2):
        f = q_sqrt2
        roots = real_roots(f, [f.one, f.zero, f.rational(-2)])
        assert len(roots) == 2
        assert all(r.field is f for r in roots)
        assert f.as_rational(f.add(roots[0].root, roots[1].root)) == 0

    def test_multiplicity_is_reported(self):
        field = NumberField.rationals()
        [root] = real_roots(field, [field.rational(1), field.rational(-2), field.rational(1)])
        assert root.multiplicity == 2

    def test_no_real_roots(self):
        field = NumberField.rationals()
        assert real_roots(field, [field.rational(1), field.zero, field.rational(1)]) == []


@pytest.fixture(scope="module")
def tiny_generators():
    # ±sqrt(2)*10^-30: a norm whose real roots sit next to roots of the conjugate polynomial
    return RealAlgebraic.roots_of(UniPoly.from_coefficients([1, 0, Fraction(-2, 10**60)]))


class TestConjugateRoots:
    def test_roots_of_the_conjugate_only_are_rejected(self, tiny_generators):
        field = NumberField(tiny_generators[0])
        assert real_roots(field, [field.one, field.zero, field.neg(field.theta)]) == []

    def test_roots_beside_conjugate_roots_are_kept(self, tiny_generators):
        field = NumberField(tiny_generators[1])
        roots = real_roots(field, [field.one, field.zero, field.neg(field.theta)])
        assert [r.value.sign() for r in roots] == [Sign.NEGATIVE, Sign.POSITIVE]
        expected = (2e-60) ** 0.25
        assert [r.value.to_float(1e-40) for r in roots] == pytest.approx([-expected, expected], rel=1e-9)
        assert all(r.field.degree == 4 for r in roots)

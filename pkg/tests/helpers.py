from fractions import Fraction

from app.services.poly_core import MultiPoly

MOTZKIN = "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"
SADDLE_CUBIC = "x^3 - 3*y^2"
VALLEY = "(x*y - 1)^2 + y^2"
RADIAL = "x^2 + y^2"
QUARTIC = "x^4 + y^4"


def rational_coefficient(series, exponent) -> Fraction:
    """Exact coefficient of ``t^exponent`` in a series over Q; 0 when absent."""
    c = series.coefficient(Fraction(exponent))
    if c is None:
        return Fraction(0)
    value = series.field.as_rational(c)
    assert value is not None, f"coefficient of t^{exponent} is irrational"
    return value


def find_branch(report, orientation: str, sign: int, exponent, coefficient):
    """The branch of ``report`` whose coordinate series has the given term."""
    matches = [
        b
        for b in report.branch_data
        if b.orientation == orientation
        and b.sign == sign
        and rational_coefficient(b.coordinate, exponent) == Fraction(coefficient)
    ]
    assert len(matches) == 1, [b.label for b in report.branch_data]
    return matches[0]


def random_polynomial(rng, max_degree: int, max_coefficient: int, max_terms: int):
    """Sparse nonconstant polynomial with integer coefficients in [-max_coefficient, max_coefficient]."""
    monomials = [(i, d - i) for d in range(1, max_degree + 1) for i in range(d + 1)]
    count = int(rng.integers(1, max_terms + 1))
    chosen = rng.choice(len(monomials), size=min(count, len(monomials)), replace=False)
    nonzero = [c for c in range(-max_coefficient, max_coefficient + 1) if c != 0]
    terms = {monomials[int(k)]: int(rng.choice(nonzero)) for k in chosen}
    terms[(0, 0)] = int(rng.integers(-max_coefficient, max_coefficient + 1))
    return MultiPoly.from_terms(terms)

"""
Polynomial input grammar.

Accepts integer, decimal and rational literals, the variables ``x`` and ``y``, the
operators ``+ - * / ^`` and parentheses. Multiplication is always explicit, exponents
are nonnegative integer literals and division is only by nonzero constants.
"""

import logging
from fractions import Fraction
from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from app.core.exceptions import PolynomialParseError, TangencyError, UnsupportedInputError
from app.services.poly_core import MultiPoly

logger = logging.getLogger(__name__)

GRAMMAR = r"""
?start: sum

?sum: product
    | sum "+" product       -> add
    | sum "-" product       -> sub

?product: unary
    | product "*" unary     -> mul
    | product "/" unary     -> div

?unary: power
    | "-" unary             -> neg
    | "+" unary

?power: atom
    | atom "^" NUMBER       -> pow

?atom: NUMBER               -> number
    | NAME                  -> variable
    | "(" sum ")"

NUMBER: /[0-9]+(\.[0-9]+)?/
NAME: /[A-Za-z_][A-Za-z_0-9]*/

%import common.WS
%ignore WS
"""

VARIABLES = {"x": MultiPoly.x, "y": MultiPoly.y}
INEQUALITY_TOKENS = ("<", ">", "≤", "≥")


@v_args(inline=True)
class _ToPolynomial(Transformer):
    def number(self, token) -> MultiPoly:
        return MultiPoly.constant(Fraction(str(token)))

    def variable(self, token) -> MultiPoly:
        name = str(token)
        if name in VARIABLES:
            return VARIABLES[name]()
        if len(name) == 1:
            raise UnsupportedInputError(f"Only the variables x and y are supported, got '{name}'")
        raise PolynomialParseError(f"Unknown symbol '{name}'; multiplication must be written with '*'")

    def add(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return a + b

    def sub(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return a - b

    def mul(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return a * b

    def div(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        if not b.is_constant:
            raise PolynomialParseError(f"Division by the non-constant {b}")
        if b.is_zero:
            raise PolynomialParseError("Division by zero")
        return a * (1 / b.constant_value)

    def neg(self, a: MultiPoly) -> MultiPoly:
        return -a

    def pow(self, base: MultiPoly, exponent) -> MultiPoly:
        text = str(exponent)
        if not text.isdigit():
            raise PolynomialParseError(f"Exponent {text} is not a nonnegative integer")
        return base ** int(text)


class PolynomialParser:
    """LALR parser turning polynomial strings into ``MultiPoly`` values."""

    def __init__(self):
        self._lark = Lark(GRAMMAR, parser="lalr", transformer=_ToPolynomial())

    def parse(self, text: str) -> MultiPoly:
        """
        Parse one polynomial.

        Raises:
            PolynomialParseError: Grammar violation.
            UnsupportedInputError: A third variable appears.
        """
        if not text or not text.strip():
            raise PolynomialParseError("Empty polynomial")
        try:
            return self._lark.parse(text)
        except VisitError as e:
            if isinstance(e.orig_exc, TangencyError):
                raise e.orig_exc from None
            raise PolynomialParseError(f"Cannot interpret '{text}': {e.orig_exc}") from e
        except (UnexpectedCharacters, UnexpectedEOF, UnexpectedInput) as e:
            column = getattr(e, "column", "?")
            raise PolynomialParseError(f"Syntax error in '{text}' at column {column}") from e
        except LarkError as e:
            raise PolynomialParseError(f"Cannot parse '{text}': {e}") from e

    def parse_constraint(self, text: str) -> MultiPoly:
        """
        Parse ``g`` or ``lhs = rhs`` (read as ``lhs - rhs = 0``).

        Raises:
            UnsupportedInputError: For inequality constraints.
        """
        if any(token in text for token in INEQUALITY_TOKENS):
            raise UnsupportedInputError(f"Inequality constraints are not supported: '{text}'")
        sides = text.split("=")
        if len(sides) == 1:
            return self.parse(text)
        if len(sides) != 2:
            raise PolynomialParseError(f"Constraint '{text}' has more than one '='")
        return self.parse(sides[0]) - self.parse(sides[1])


@lru_cache
def get_parser() -> PolynomialParser:
    return PolynomialParser()


def parse_polynomial(text: str) -> MultiPoly:
    p = get_parser().parse(text)
    logger.debug(f"Parsed '{text}' as {p}")
    return p


def parse_constraint(text: str) -> MultiPoly:
    return get_parser().parse_constraint(text)

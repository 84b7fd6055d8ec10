"""
Canonical forms for answer expressions.

Rational-closed subtrees are folded exactly with Fraction; everything else is
evaluated in interval arithmetic at 200 bits (about 60 significant digits), so
every numeric value carries a rigorous error bound. The mpmath contexts below
are private to this module and their precision is fixed at import time, which
keeps evaluation safe from concurrent judging threads.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext
from mpmath.ctx_mp import MPContext

from arena.exceptions import EvaluationError, ExpressionParseError, JudgmentError
from grading.expressions import BinOp, Const, Func, Neg, Num, parse_expr, render

logger = logging.getLogger(__name__)

PRECISION_BITS = 200
MAX_EXACT_EXPONENT = 4096
# Exact values larger than this are carried as intervals; keeps every folded
# integer printable in decimal.
MAX_EXACT_BITS = 14000
MAX_FACTORIAL = 5000

IV = MPIntervalContext()
IV.prec = PRECISION_BITS
MP = MPContext()
MP.prec = PRECISION_BITS

RELATIVE_TOLERANCE = MP.mpf(10) ** -30
ABSOLUTE_TOLERANCE = MP.mpf(10) ** -40

_NUMERIC_FAILURES = (ValueError, ArithmeticError)


@dataclass(frozen=True)
class Value:
    exact: Optional[Fraction]
    interval: object

    @property
    def bounds(self):
        lower, upper = self.interval._mpi_
        return MP.mpf(lower), MP.mpf(upper)

    def sign(self):
        """1, -1 or 0 when the interval certifies it, None when it straddles zero."""
        if self.exact is not None:
            return (self.exact > 0) - (self.exact < 0)
        lower, upper = self.bounds
        if lower > 0:
            return 1
        if upper < 0:
            return -1
        return None


@dataclass(frozen=True)
class CanonicalForm:
    exact_value: Optional[Fraction]
    numeric_value: object  # mpf midpoint
    error_bound: object  # mpf half-width of the enclosing interval
    normalized_tree: object

    def numeric_text(self, digits=50):
        return MP.nstr(self.numeric_value, digits)

    @property
    def text(self):
        return render(self.normalized_tree)


# -----------------------
# Interval helpers
# -----------------------
def _from_fraction(value):
    return IV.mpf(value.numerator) / IV.mpf(value.denominator)


def _size(value):
    return max(value.numerator.bit_length(), value.denominator.bit_length())


def _exact(value):
    if _size(value) > MAX_EXACT_BITS:
        return Value(None, _from_fraction(value))
    return Value(value, _from_fraction(value))


def _checked(interval, what):
    lower, upper = interval._mpi_
    if libmp.finf in (lower, upper) or libmp.fninf in (lower, upper) or libmp.fnan in (lower, upper):
        raise EvaluationError(f"{what} is not a finite real number")
    return Value(None, interval)


def _numeric(fn, *args, what):
    try:
        result = fn(*args)
    except _NUMERIC_FAILURES as e:
        raise EvaluationError(f"{what}: {e}") from e
    return _checked(result, what)


def _integer_root(n, k):
    """Exact k-th root of a non-negative integer, or None."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def _exact_root(value, k):
    if k > MAX_EXACT_EXPONENT:
        return None
    numerator = _integer_root(value.numerator, k)
    denominator = _integer_root(value.denominator, k)
    if numerator is None or denominator is None:
        return None
    return Fraction(numerator, denominator)


def _exact_power(base, exponent):
    p, q = exponent.numerator, exponent.denominator
    if base == 0 and p < 0:
        raise EvaluationError('Division by zero in power')
    if base < 0 and q % 2 == 0:
        raise EvaluationError('Even root of a negative number')
    if abs(base) not in (0, 1):
        if abs(p) > MAX_EXACT_EXPONENT or abs(p) * _size(base) > MAX_EXACT_BITS * q:
            return None
    if q == 1:
        return base ** p
    root = _exact_root(abs(base), q)
    if root is None:
        return None
    if base < 0:
        root = -root
    return root ** p


# -----------------------
# Arithmetic on values
# -----------------------
def add(a, b):
    if a.exact is not None and b.exact is not None:
        return _exact(a.exact + b.exact)
    return _numeric(lambda x, y: x + y, a.interval, b.interval, what='sum')


def negate(a):
    if a.exact is not None:
        return _exact(-a.exact)
    return Value(None, -a.interval)


def multiply(a, b):
    if a.exact is not None and b.exact is not None:
        return _exact(a.exact * b.exact)
    if a.exact == 0 or b.exact == 0:
        return _exact(Fraction(0))
    return _numeric(lambda x, y: x * y, a.interval, b.interval, what='product')


def divide(a, b):
    if b.exact == 0:
        raise EvaluationError('Division by zero')
    if b.sign() is None:
        raise EvaluationError('Denominator cannot be certified nonzero')
    if a.exact is not None and b.exact is not None:
        return _exact(a.exact / b.exact)
    if a.exact == 0:
        return _exact(Fraction(0))
    return _numeric(lambda x, y: x / y, a.interval, b.interval, what='quotient')


def power(base, exponent):
    if base.exact == 1:
        return _exact(Fraction(1))
    e = exponent.exact
    if e is not None:
        if base.exact is not None:
            result = _exact_power(base.exact, e)
            if result is not None:
                return _exact(result)
        sign = base.sign()
        if e.denominator == 1:
            if e < 0 and sign is None:
                raise EvaluationError('Negative power of a value that may be zero')
            return _numeric(lambda x: x ** int(e), base.interval, what='power')
        if sign == 1:
            return _numeric(lambda x, y: x ** y, base.interval, exponent.interval, what='power')
        if sign == -1 and e.denominator % 2 == 1:
            magnitude = _numeric(lambda x, y: x ** y, -base.interval, exponent.interval, what='power')
            return magnitude if e.numerator % 2 == 0 else negate(magnitude)
        raise EvaluationError('Power is not real')
    if base.sign() == 1:
        return _numeric(lambda x, y: x ** y, base.interval, exponent.interval, what='power')
    raise EvaluationError('Power with irrational exponent needs a positive base')


def _require_integer(value, what):
    if value.exact is None or value.exact.denominator != 1:
        raise EvaluationError(f"{what} needs an exact integer argument")
    return value.exact.numerator


def apply_function(name, args):
    x = args[0]
    if name == 'sqrt':
        if x.exact is not None:
            if x.exact < 0:
                raise EvaluationError('Square root of a negative number')
            root = _exact_root(x.exact, 2)
            if root is not None:
                return _exact(root)
        if x.sign() != 1 and x.exact != 0:
            raise EvaluationError('Square root argument cannot be certified non-negative')
        return _numeric(IV.sqrt, x.interval, what='sqrt')
    if name == 'exp':
        if x.exact == 0:
            return _exact(Fraction(1))
        return _numeric(IV.exp, x.interval, what='exp')
    if name == 'log':
        if x.exact == 1:
            return _exact(Fraction(0))
        if x.sign() != 1:
            raise EvaluationError('Logarithm of a non-positive value')
        return _numeric(IV.ln, x.interval, what='log')
    if name in ('sin', 'tan'):
        if x.exact == 0:
            return _exact(Fraction(0))
        return _numeric(getattr(IV, name), x.interval, what=name)
    if name == 'cos':
        if x.exact == 0:
            return _exact(Fraction(1))
        return _numeric(IV.cos, x.interval, what='cos')
    if name == 'abs':
        if x.exact is not None:
            return _exact(abs(x.exact))
        return Value(None, abs(x.interval))
    if name == 'factorial':
        n = _require_integer(x, 'factorial')
        if n < 0 or n > MAX_FACTORIAL:
            raise EvaluationError(f"factorial is defined here for 0 <= n <= {MAX_FACTORIAL}, got {n}")
        return _exact(Fraction(math.factorial(n)))
    if name == 'binom':
        n = _require_integer(x, 'binomial')
        k = _require_integer(args[1], 'binomial')
        if n < 0 or k < 0:
            raise EvaluationError('binomial needs non-negative arguments')
        if n > MAX_FACTORIAL:
            raise EvaluationError(f"binomial is defined here for n <= {MAX_FACTORIAL}, got {n}")
        return _exact(Fraction(math.comb(n, k)))
    raise EvaluationError(f"Unknown function '{name}'")


# -----------------------
# Normalization
# -----------------------
def _negate_node(node):
    if isinstance(node, Num):
        return Num(-node.value)
    if isinstance(node, Neg):
        return node.operand
    return Neg(node)


def _flatten(node, op):
    if isinstance(node, BinOp) and node.op == op:
        return _flatten(node.left, op) + _flatten(node.right, op)
    return [node]


def _signed_terms(node):
    if isinstance(node, BinOp) and node.op == '+':
        return _signed_terms(node.left) + _signed_terms(node.right)
    if isinstance(node, BinOp) and node.op == '-':
        return _signed_terms(node.left) + [(negated, not sign) for negated, sign in _signed_terms(node.right)]
    return [(node, True)]


def _chain(op, nodes, identity, combine):
    """Fold constants of a commutative chain and sort the remaining operands."""
    constant = identity
    others = []
    for node in nodes:
        for piece in _flatten(node, op):
            if isinstance(piece, Num):
                combined = combine(constant, piece.value)
                if _size(combined) <= MAX_EXACT_BITS:
                    constant = combined
                    continue
            others.append(piece)
    if constant != identity or not others:
        others.append(Num(constant))
    others.sort(key=render)
    result = others[0]
    for node in others[1:]:
        result = BinOp(op, result, node)
    return result


def reduce_expression(node):
    """Return (normalized tree, value) for a parsed expression."""
    if isinstance(node, Num):
        return node, _exact(node.value)
    if isinstance(node, Const):
        constant = IV.pi if node.name == 'pi' else IV.e
        return node, Value(None, +constant)
    if isinstance(node, Neg):
        inner, value = reduce_expression(node.operand)
        value = negate(value)
        if value.exact is not None:
            return Num(value.exact), value
        return _negate_node(inner), value
    if isinstance(node, BinOp) and node.op in ('+', '-'):
        total = None
        pieces = []
        for term, positive in _signed_terms(node):
            reduced, value = reduce_expression(term)
            if not positive:
                reduced, value = _negate_node(reduced), negate(value)
            total = value if total is None else add(total, value)
            pieces.append(reduced)
        if total.exact is not None:
            return Num(total.exact), total
        return _chain('+', pieces, Fraction(0), lambda a, b: a + b), total
    if isinstance(node, BinOp) and node.op == '*':
        total = None
        pieces = []
        for factor in _flatten(node, '*'):
            reduced, value = reduce_expression(factor)
            total = value if total is None else multiply(total, value)
            pieces.append(reduced)
        if total.exact is not None:
            return Num(total.exact), total
        return _chain('*', pieces, Fraction(1), lambda a, b: a * b), total
    if isinstance(node, BinOp):
        left, left_value = reduce_expression(node.left)
        right, right_value = reduce_expression(node.right)
        value = divide(left_value, right_value) if node.op == '/' else power(left_value, right_value)
        if value.exact is not None:
            return Num(value.exact), value
        return BinOp(node.op, left, right), value
    if isinstance(node, Func):
        reduced = [reduce_expression(arg) for arg in node.args]
        value = apply_function(node.name, [v for _, v in reduced])
        if value.exact is not None:
            return Num(value.exact), value
        return Func(node.name, tuple(n for n, _ in reduced)), value
    raise EvaluationError(f"Not an expression node: {node!r}")


def canonicalize(ast):
    """Fold, sort and evaluate an expression tree."""
    tree, value = reduce_expression(ast)
    lower, upper = value.bounds
    return CanonicalForm(
        exact_value=value.exact,
        numeric_value=(lower + upper) / 2,
        error_bound=(upper - lower) / 2,
        normalized_tree=tree,
    )


@lru_cache(maxsize=8192)
def canonical_from_text(text):
    """Parse and canonicalize; parse and evaluation errors propagate."""
    return canonicalize(parse_expr(text))


def forms_equal(a, b):
    if a.exact_value is not None and b.exact_value is not None:
        return a.exact_value == b.exact_value
    difference = abs(a.numeric_value - b.numeric_value)
    scale = max(abs(a.numeric_value), abs(b.numeric_value))
    return difference <= max(RELATIVE_TOLERANCE * scale, ABSOLUTE_TOLERANCE)


def _as_form(expr):
    if isinstance(expr, CanonicalForm):
        return expr
    if isinstance(expr, str):
        return canonical_from_text(expr)
    return canonicalize(expr)


def equivalent(a, b):
    """
    True when both expressions denote the same real number.

    Accepts trees, canonical forms or answer strings. Evaluation failures on
    either side raise JudgmentError rather than returning False.
    """
    try:
        return forms_equal(_as_form(a), _as_form(b))
    except (EvaluationError, ExpressionParseError) as e:
        raise JudgmentError(f"Cannot compare expressions: {e}") from e

"""
Scalar answer expressions: AST, parser and printer.

The parser accepts plain infix ("2^10 + 1", "sqrt(5)*pi", "1/2") and the
LaTeX subset models tend to write ("\\frac{2}{\\sqrt{5}\\pi}", "\\binom{7}{3}",
"2^{10}"). Expressions are closed: any identifier that is not a known
constant or function is rejected as a free variable.
"""
import re
from dataclasses import dataclass
from fractions import Fraction

from arena.exceptions import ExpressionParseError


# -----------------------
# AST
# -----------------------
@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Const:
    name: str  # 'pi' or 'e'


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple


FUNCTION_ARITY = {
    'sqrt': 1,
    'exp': 1,
    'log': 1,
    'sin': 1,
    'cos': 1,
    'tan': 1,
    'abs': 1,
    'factorial': 1,
    'binom': 2,
}

FUNCTION_ALIASES = {
    'ln': 'log',
    'binomial': 'binom',
}


def render(node):
    """Print a node as fully parenthesised plain infix that parses back to the same value."""
    if isinstance(node, Num):
        value = node.value
        if value.denominator == 1:
            return str(value.numerator) if value >= 0 else f"({value.numerator})"
        return f"({value.numerator}/{value.denominator})"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{render(node.operand)})"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, Func):
        return f"{node.name}({', '.join(render(arg) for arg in node.args)})"
    raise TypeError(f"Not an expression node: {node!r}")


# -----------------------
# Preprocessing
# -----------------------
_UNICODE = {
    'π': r'\pi ',
    '√': r'\sqrt ',
    '×': '*',
    '·': '*',
    '⋅': '*',
    '∗': '*',
    '−': '-',
    '–': '-',
    '÷': '/',
    '⁻¹': '^{-1}',
    '²': '^{2}',
    '³': '^{3}',
}

_SPACING = re.compile(r'\\[,;:! ]|\\quad|\\qquad|\\displaystyle|\\mathrm|\\operatorname')
_DELIMITERS = re.compile(r'\\(?:left|right|bigl|bigr|Bigl|Bigr|big|Big)\b\s*')


def preprocess(text):
    """Strip math delimiters, spacing commands and a trailing period."""
    if text is None:
        return ''
    s = text.strip()
    for old, new in _UNICODE.items():
        s = s.replace(old, new)
    changed = True
    while changed:
        changed = False
        s = s.strip()
        if s.endswith('.'):
            s = s[:-1]
            changed = True
        for opening, closing in (('$$', '$$'), ('$', '$'), (r'\(', r'\)'), (r'\[', r'\]')):
            if len(s) >= len(opening) + len(closing) and s.startswith(opening) and s.endswith(closing):
                s = s[len(opening):len(s) - len(closing)]
                changed = True
                break
    s = _DELIMITERS.sub('', s)
    s = _SPACING.sub(' ', s)
    s = re.sub(r'\\[dt]frac', r'\\frac', s)
    s = s.replace(r'\cdot', '*').replace(r'\times', '*').replace(r'\div', '/')
    s = s.replace(r'\{', '{').replace(r'\}', '}')
    s = s.replace(r'\lvert', '|').replace(r'\rvert', '|').replace(r'\vert', '|')
    return s.strip()


# -----------------------
# Lexer
# -----------------------
_NUMBER = re.compile(r'(\d+(?:\.\d*)?|\.\d+)(?:[eE]([+-]?\d+)(?![A-Za-z]))?')
_IDENT = re.compile(r'[A-Za-z]+')
_COMMAND = re.compile(r'\\([A-Za-z]+)')
_SYMBOLS = set('+-*/^(){}[],|!')
MAX_LITERAL_DIGITS = 3000
MAX_LITERAL_EXPONENT = 1000


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER, IDENT, COMMAND, SYMBOL, END
    text: str
    position: int


def _check_literal(match, text, position):
    mantissa, exponent = match.group(1), match.group(2)
    if sum(ch.isdigit() for ch in mantissa) > MAX_LITERAL_DIGITS:
        raise ExpressionParseError(f"Numeric literal longer than {MAX_LITERAL_DIGITS} digits", position=position, text=text)
    if exponent is None:
        return
    digits = exponent.lstrip('+-').lstrip('0')
    if len(digits) > len(str(MAX_LITERAL_EXPONENT)) or (digits and int(digits) > MAX_LITERAL_EXPONENT):
        raise ExpressionParseError('Exponent of numeric literal out of range', position=position, text=text)


def tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        match = _NUMBER.match(text, i)
        if match and (ch.isdigit() or ch == '.'):
            _check_literal(match, text, i)
            tokens.append(Token('NUMBER', match.group(0), i))
            i = match.end()
            continue
        if ch == '\\':
            match = _COMMAND.match(text, i)
            if not match:
                raise ExpressionParseError('Dangling backslash', position=i, text=text)
            tokens.append(Token('COMMAND', match.group(1), i))
            i = match.end()
            continue
        if ch.isalpha():
            match = _IDENT.match(text, i)
            tokens.append(Token('IDENT', match.group(0), i))
            i = match.end()
            continue
        if ch in _SYMBOLS:
            tokens.append(Token('SYMBOL', ch, i))
            i += 1
            continue
        raise ExpressionParseError(f"Unexpected character '{ch}'", position=i, text=text)
    tokens.append(Token('END', '', len(text)))
    return tokens


# -----------------------
# Parser
# -----------------------
_CLOSERS = {'(': ')', '{': '}', '[': ']'}


class ExpressionParser:
    """Recursive-descent parser over the token stream of one answer string."""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.abs_depth = 0

    # token helpers
    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message, token=None):
        token = token or self.peek()
        return ExpressionParseError(message, position=token.position, text=self.text)

    def at_symbol(self, *symbols):
        token = self.peek()
        return token.kind == 'SYMBOL' and token.text in symbols

    def expect_symbol(self, symbol):
        token = self.peek()
        if token.kind != 'SYMBOL' or token.text != symbol:
            found = token.text or 'end of input'
            raise self.error(f"Expected '{symbol}' but found '{found}'")
        return self.advance()

    # grammar
    def parse(self):
        if self.peek().kind == 'END':
            raise self.error('Empty expression')
        node = self.expression()
        if self.peek().kind != 'END':
            raise self.error(f"Unexpected '{self.peek().text}'")
        return node

    def expression(self):
        node = self.term()
        while self.at_symbol('+', '-'):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            if self.at_symbol('*', '/'):
                op = self.advance().text
                node = BinOp(op, node, self.unary())
            elif self.starts_implicit_factor():
                node = BinOp('*', node, self.power())
            else:
                return node

    def starts_implicit_factor(self):
        token = self.peek()
        if token.kind in ('IDENT', 'COMMAND'):
            return True
        if token.kind == 'NUMBER':
            # "2 3" is never read as a product
            raise self.error(f"Unexpected number '{token.text}'")
        if token.kind == 'SYMBOL':
            if token.text in ('(', '{', '['):
                return True
            if token.text == '|' and self.abs_depth == 0:
                return True
        return False

    def unary(self):
        if self.at_symbol('-'):
            self.advance()
            return Neg(self.unary())
        if self.at_symbol('+'):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.postfix()
        if self.at_symbol('^'):
            self.advance()
            return BinOp('^', base, self.exponent())
        return base

    def exponent(self):
        # a bare exponent binds to the next single token, optionally signed
        if self.at_symbol('-'):
            self.advance()
            return Neg(self.exponent())
        if self.at_symbol('+'):
            self.advance()
            return self.exponent()
        node = self.postfix()
        if self.at_symbol('^'):
            self.advance()
            return BinOp('^', node, self.exponent())
        return node

    def postfix(self):
        node = self.primary()
        while self.at_symbol('!'):
            self.advance()
            node = Func('factorial', (node,))
        return node

    def primary(self):
        token = self.peek()
        if token.kind == 'NUMBER':
            self.advance()
            return Num(Fraction(token.text))
        if token.kind == 'SYMBOL':
            if token.text in _CLOSERS:
                self.advance()
                node = self.expression()
                self.expect_symbol(_CLOSERS[token.text])
                return node
            if token.text == '|':
                self.advance()
                self.abs_depth += 1
                node = self.expression()
                self.abs_depth -= 1
                self.expect_symbol('|')
                return Func('abs', (node,))
            raise self.error(f"Unexpected '{token.text}'")
        if token.kind == 'IDENT':
            return self.identifier()
        if token.kind == 'COMMAND':
            return self.command()
        raise self.error('Unexpected end of input')

    def identifier(self):
        token = self.advance()
        name = token.text
        if name.lower() == 'pi':
            return Const('pi')
        if name == 'e':
            return Const('e')
        name = FUNCTION_ALIASES.get(name, name)
        if name in FUNCTION_ARITY:
            return Func(name, self.function_args(name, token))
        raise ExpressionParseError(
            f"Free variable '{token.text}'", position=token.position, text=self.text
        )

    def command(self):
        token = self.advance()
        name = token.text
        if name == 'pi':
            return Const('pi')
        if name == 'frac':
            numerator = self.latex_arg(split_digits=True)
            denominator = self.latex_arg(split_digits=True)
            return BinOp('/', numerator, denominator)
        if name == 'binom':
            return Func('binom', (self.latex_arg(split_digits=True), self.latex_arg(split_digits=True)))
        if name == 'sqrt':
            if self.at_symbol('['):
                self.advance()
                index = self.expression()
                self.expect_symbol(']')
                radicand = self.latex_arg()
                return BinOp('^', radicand, BinOp('/', Num(Fraction(1)), index))
            return Func('sqrt', (self.latex_arg(),))
        if name in ('boxed', 'text'):
            return self.latex_arg()
        name = FUNCTION_ALIASES.get(name, name)
        if name in FUNCTION_ARITY:
            return Func(name, self.function_args(name, token))
        raise ExpressionParseError(f"Unsupported command '\\{token.text}'", position=token.position, text=self.text)

    def latex_arg(self, split_digits=False):
        token = self.peek()
        if token.kind == 'SYMBOL' and token.text == '{':
            self.advance()
            node = self.expression()
            self.expect_symbol('}')
            return node
        if split_digits and token.kind == 'NUMBER' and len(token.text) > 1 and token.text.isdigit():
            # \frac12 takes one digit per argument
            self.tokens[self.index] = Token('NUMBER', token.text[1:], token.position + 1)
            return Num(Fraction(int(token.text[0])))
        return self.postfix()

    def function_args(self, name, token):
        arity = FUNCTION_ARITY[name]
        if self.at_symbol('(', '{'):
            closer = _CLOSERS[self.advance().text]
            args = [self.expression()]
            while self.at_symbol(','):
                self.advance()
                args.append(self.expression())
            self.expect_symbol(closer)
            if arity == 2 and len(args) == 1 and self.at_symbol('{'):
                args.append(self.latex_arg())
        else:
            if arity != 1:
                raise self.error(f"Function '{name}' needs {arity} arguments", token)
            args = [self.power()]
        if len(args) != arity:
            raise ExpressionParseError(
                f"Function '{name}' takes {arity} argument(s), got {len(args)}",
                position=token.position,
                text=self.text,
            )
        return tuple(args)


def parse_expr(text):
    """Parse an answer string into an expression tree."""
    cleaned = preprocess(text)
    return ExpressionParser(cleaned).parse()

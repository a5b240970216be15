"""Closed-form expression language for metric and field components.

A tiny arithmetic language over declared chart coordinates: ``+ - * /``,
integer powers via ``^``, unary minus, and the primitive functions the
jet library knows.  Parsing is precedence-climbing (Pratt); every AST
node remembers its source span so evaluation-time domain failures can
point back at the offending subexpression.

Precedence, tightest first: ``^``, unary ``-``, ``* /``, ``+ -``.
``^`` is right-associative and its exponent must be an unsigned integer
literal; chains like ``x^2^3`` fold to ``x^8`` at parse time.
"""

import dataclasses
import re
from dataclasses import dataclass

from . import jets as jetlib
from . import series as serlib
from .jets import Jet3, JetDomainError

DEFAULT_COORDS = ("x", "y", "t")

_MAX_EXPONENT = 10 ** 6


class ExprError(ValueError):
    """Base for parse and evaluation errors, carrying a byte offset."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class ExprSyntaxError(ExprError):
    """Malformed source text; ``expected`` lists the acceptable tokens."""

    def __init__(self, message, offset, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message}; expected one of {', '.join(self.expected)}"
        super().__init__(message, offset)


class UnknownSymbolError(ExprError):
    def __init__(self, name, offset, coords):
        self.name = name
        super().__init__(
            f"unknown symbol {name!r}; chart coordinates are {', '.join(coords)}", offset)


class ExprDomainError(ExprError):
    """A jet domain error, located at the subexpression that raised it."""

    def __init__(self, cause, span, source):
        self.cause = cause
        self.span = span
        where = ""
        if source and span[1] <= len(source):
            where = f" in {source[span[0]:span[1]]!r}"
        at = "" if cause.point is None else f" at point {cause.point}"
        super().__init__(f"{cause.fn} undefined{where}{at}", span[0])


# ---- AST --------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float
    span: tuple = (0, 0)


@dataclass(frozen=True)
class Var:
    name: str
    index: int
    span: tuple = (0, 0)


@dataclass(frozen=True)
class Neg:
    arg: object
    span: tuple = (0, 0)


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object
    span: tuple = (0, 0)


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    span: tuple = (0, 0)


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object
    span: tuple = (0, 0)


# ---- tokenizer --------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        tokens.append((m.lastgroup, m.group(), m.span()))
    tokens.append(("end", "", (len(text), len(text))))
    return tokens


# ---- parser -----------------------------------------------------------

_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_BP = 25


class _Parser:
    def __init__(self, text, coords):
        self.text = text
        self.coords = tuple(coords)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expression(self, rbp):
        left = self.prefix(self.advance())
        while True:
            kind, text, span = self.peek()
            if kind != "op" or _BP.get(text, -1) <= rbp:
                return left
            self.advance()
            left = self.infix(text, span, left)

    def prefix(self, tok):
        kind, text, span = tok
        if kind == "num":
            return Num(float(text), span)
        if kind == "ident":
            if self.peek()[1] == "(":
                return self.call(text, span)
            if text in self.coords:
                return Var(text, self.coords.index(text), span)
            raise UnknownSymbolError(text, span[0], self.coords)
        if kind == "op" and text == "-":
            arg = self.expression(_UNARY_BP)
            return Neg(arg, (span[0], arg.span[1]))
        if kind == "op" and text == "(":
            inner = self.expression(0)
            close = self.advance()
            if close[1] != ")":
                raise ExprSyntaxError("unbalanced parenthesis", close[2][0], [")"])
            return dataclasses.replace(inner, span=(span[0], close[2][1]))
        raise ExprSyntaxError(f"unexpected token {text or 'end of input'!r}", span[0],
                              ["number", "identifier", "-", "("])

    def infix(self, op, span, left):
        if op == "^":
            n, end = self.exponent()
            return Pow(left, n, (left.span[0], end))
        right = self.expression(_BP[op])
        return Bin(op, left, right, (left.span[0], right.span[1]))

    def exponent(self):
        kind, text, span = self.advance()
        if kind != "num" or not text.isdigit():
            raise ExprSyntaxError("power exponent must be an unsigned integer literal",
                                  span[0], ["integer"])
        n = int(text)
        end = span[1]
        if self.peek()[1] == "^":
            self.advance()
            m, end = self.exponent()
            n = n ** m
        if n > _MAX_EXPONENT:
            raise ExprSyntaxError(f"exponent {n} too large", span[0])
        return n, end

    def call(self, fn, span):
        if fn not in jetlib.FUNCTIONS:
            raise UnknownSymbolError(fn, span[0], sorted(jetlib.FUNCTIONS))
        self.advance()
        arg = self.expression(0)
        close = self.advance()
        if close[1] != ")":
            raise ExprSyntaxError("unbalanced parenthesis in call", close[2][0], [")"])
        return Call(fn, arg, (span[0], close[2][1]))


def parse(text, coords=DEFAULT_COORDS):
    """Parse source text into an expression tree over the given coordinates."""
    p = _Parser(text, coords)
    e = p.expression(0)
    kind, text_, span = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"trailing input {text_!r}", span[0], ["end of input"])
    return e


# ---- printing ---------------------------------------------------------

def _prec(e):
    if isinstance(e, Bin):
        return _BP[e.op]
    if isinstance(e, Neg):
        return _UNARY_BP
    if isinstance(e, Pow):
        return _BP["^"]
    return 100


def _wrap(s, needed):
    return f"({s})" if needed else s


def pretty(e):
    'Minimal-parenthesis rendering; printing then reparsing is idempotent.'
    if isinstance(e, Num):
        v = e.value
        return str(int(v)) if v == int(v) and abs(v) < 1e16 else repr(v)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = pretty(e.arg)
        return "-" + _wrap(inner, _prec(e.arg) < _UNARY_BP or isinstance(e.arg, Neg))
    if isinstance(e, Bin):
        p = _BP[e.op]
        left = _wrap(pretty(e.left), _prec(e.left) < p or isinstance(e.left, Neg))
        right = _wrap(pretty(e.right),
                      _prec(e.right) <= p or isinstance(e.right, Neg))
        return f"{left} {e.op} {right}"
    if isinstance(e, Pow):
        base = _wrap(pretty(e.base), _prec(e.base) <= _BP["^"] or isinstance(e.base, Neg)
                     or isinstance(e.base, Pow))
        return f"{base}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.fn}({pretty(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def free_vars(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return free_vars(e.arg)
    if isinstance(e, Bin):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Call):
        return free_vars(e.arg)
    return set()


# ---- evaluation -------------------------------------------------------

def eval_jet(e, at, order, coords=DEFAULT_COORDS, _source=None):
    """Evaluate to a jet of the requested order at the chart point ``at``.

    Coordinate seeds carry exactly ``order`` tiers, so the result never
    depends on derivatives beyond the requested order.
    """
    seeds = jetlib.seed_chart(at, order)
    return _eval(e, seeds, jetlib.FUNCTIONS, Jet3.constant, order, at, _source)


def eval_value(e, at, coords=DEFAULT_COORDS):
    return eval_jet(e, at, 0, coords).value


def eval_series(e, t0, order, var="t"):
    'Univariate evaluation for profiles; the expression may use only ``var``.'
    extra = free_vars(e) - {var}
    if extra:
        raise ExprError(f"profile expression uses non-profile symbols {sorted(extra)}", 0)
    seed = serlib.Series1.variable(t0, order)
    seeds = _SeriesSeeds(seed)
    return _eval(e, seeds, serlib.FUNCTIONS,
                 lambda v, order, point=None: serlib.Series1.constant(v, order),
                 order, None, None)


class _SeriesSeeds:
    def __init__(self, seed):
        self.seed = seed

    def __getitem__(self, index):
        return self.seed


def _eval(e, seeds, functions, make_const, order, at, source):
    if isinstance(e, Num):
        return make_const(e.value, order, point=at)
    if isinstance(e, Var):
        return seeds[e.index]
    if isinstance(e, Neg):
        return -_eval(e.arg, seeds, functions, make_const, order, at, source)
    if isinstance(e, Bin):
        left = _eval(e.left, seeds, functions, make_const, order, at, source)
        right = _eval(e.right, seeds, functions, make_const, order, at, source)
        try:
            if e.op == "+":
                return left + right
            if e.op == "-":
                return left - right
            if e.op == "*":
                return left * right
            return left / right
        except JetDomainError as err:
            raise ExprDomainError(err, e.span, source) from err
    if isinstance(e, Pow):
        base = _eval(e.base, seeds, functions, make_const, order, at, source)
        return base ** e.exponent
    if isinstance(e, Call):
        arg = _eval(e.arg, seeds, functions, make_const, order, at, source)
        try:
            return functions[e.fn](arg)
        except JetDomainError as err:
            raise ExprDomainError(err, e.span, source) from err
    raise TypeError(f"not an expression node: {e!r}")

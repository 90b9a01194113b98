"""Operator-expression language for Weyl polynomials.

Grammar (whitespace is ignored, juxtaposition is not multiplication)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := base ("^" uint)?
    base   := "X" | "P" | "hbar" | "i" | rational | "(" expr ")"
            | "[" expr "," expr "]" | "{" expr "," expr "}"
            | "Dx(" expr ")" | "Dp(" expr ")" | "-" factor
    rational := int ("/" uint)?

``hbar`` alone may also take a negative exponent, ``hbar^-k``, so that
every polynomial with Laurent coefficients has a printable form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from .algebra import (
    HBAR,
    I,
    P,
    X,
    GaussianRational,
    HbarLaurent,
    WeylPolynomial,
    anticommutator,
    commutator,
    deriv,
)

__all__ = [
    "ParseError",
    "ExpressionSyntaxError",
    "NonIntegerExponent",
    "UnbalancedDelimiter",
    "Literal",
    "SymX",
    "SymP",
    "SymHbar",
    "ImagUnit",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Pow",
    "Comm",
    "AntiComm",
    "DerivX",
    "DerivP",
    "parse",
    "evaluate",
    "normal_order",
    "format_polynomial",
]

MAX_NESTING = 200


class ParseError(ValueError):
    """Base class for parse failures; carries the offending position."""

    kind = "ParseError"

    def __init__(self, message: str, position: int, expected=()):
        self.message = message
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        super().__init__(self.describe())

    def describe(self) -> str:
        text = f"{self.kind} at position {self.position}: {self.message}"
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        return text


class ExpressionSyntaxError(ParseError):
    kind = "SyntaxError"


class NonIntegerExponent(ParseError):
    kind = "NonIntegerExponent"


class UnbalancedDelimiter(ParseError):
    kind = "UnbalancedDelimiter"


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: GaussianRational


@dataclass(frozen=True)
class SymX:
    pass


@dataclass(frozen=True)
class SymP:
    pass


@dataclass(frozen=True)
class SymHbar:
    pass


@dataclass(frozen=True)
class ImagUnit:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "ExprNode"


@dataclass(frozen=True)
class Add:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Sub:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Mul:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: int


@dataclass(frozen=True)
class Comm:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class AntiComm:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class DerivX:
    operand: "ExprNode"


@dataclass(frozen=True)
class DerivP:
    operand: "ExprNode"


ExprNode = Union[
    Literal, SymX, SymP, SymHbar, ImagUnit, Neg, Add, Sub, Mul, Pow,
    Comm, AntiComm, DerivX, DerivP,
]


# --- lexer -----------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "eof"
    text: str
    pos: int


_OPERATORS = set("+-*/^()[]{},")
_NAMES = {"X", "P", "hbar", "i", "Dx", "Dp"}
_CLOSERS = {"(": ")", "[": "]", "{": "}"}


def _tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch in _OPERATORS:
            tokens.append(Token("op", ch, pos))
            pos += 1
        elif "0" <= ch <= "9":
            start = pos
            while pos < n and "0" <= text[pos] <= "9":
                pos += 1
            tokens.append(Token("int", text[start:pos], start))
        elif ch.isascii() and ch.isalpha():
            start = pos
            while pos < n and text[pos].isascii() and text[pos].isalnum():
                pos += 1
            word = text[start:pos]
            if word not in _NAMES:
                raise ExpressionSyntaxError(
                    f"unknown identifier {word!r}", start, sorted(_NAMES)
                )
            tokens.append(Token("name", word, start))
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", pos)
    tokens.append(Token("eof", "", n))
    return tokens


# --- recursive-descent parser ---------------------------------------------

_BASE_START = ("X", "P", "hbar", "i", "Dx", "Dp", "(", "[", "{", "-", "<integer>")


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.idx = 0
        self.open: List[Token] = []
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.idx]

    def advance(self) -> Token:
        tok = self.tokens[self.idx]
        if tok.kind != "eof":
            self.idx += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.kind in ("op", "name") and tok.text == text

    def fail(self, message: str, expected=()):
        tok = self.tok
        if tok.kind == "eof" and self.open:
            opener = self.open[-1]
            raise UnbalancedDelimiter(
                f"{opener.text!r} opened at position {opener.pos} is never closed",
                tok.pos,
                expected,
            )
        if tok.kind == "op" and tok.text in ")]}":
            if not self.open or _CLOSERS[self.open[-1].text] != tok.text:
                raise UnbalancedDelimiter(
                    f"unmatched closing {tok.text!r}", tok.pos, expected
                )
        raise ExpressionSyntaxError(message, tok.pos, expected)

    def expect(self, text: str):
        if not self.at(text):
            shown = self.tok.text or "end of input"
            self.fail(f"found {shown!r}", (text,))
        return self.advance()

    def descend(self, tok: Token):
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ExpressionSyntaxError("expression nested too deeply", tok.pos)

    def push(self, tok: Token):
        self.descend(tok)
        self.open.append(tok)

    def close(self, text: str):
        self.expect(text)
        self.open.pop()
        self.depth -= 1

    def parse(self) -> ExprNode:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}", ("+", "-", "*", "<end>"))
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> ExprNode:
        node = self.factor()
        while self.at("*"):
            self.advance()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> ExprNode:
        node = self.base()
        if self.at("^"):
            self.advance()
            tok = self.tok
            if tok.kind == "int":
                self.advance()
                if self.at("/"):
                    raise NonIntegerExponent(
                        "exponent must be a non-negative integer", tok.pos
                    )
                return Pow(node, int(tok.text))
            if isinstance(node, SymHbar) and self.at("-"):
                self.advance()
                if self.tok.kind == "int":
                    return Pow(node, -int(self.advance().text))
            if tok.kind == "eof":
                self.fail("missing exponent", ("<integer>",))
            raise NonIntegerExponent(
                "exponent must be a non-negative integer", tok.pos, ("<integer>",)
            )
        return node

    def base(self) -> ExprNode:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            value = Fraction(int(tok.text))
            if self.at("/"):
                self.advance()
                den = self.tok
                if den.kind != "int":
                    self.fail("denominator must be an unsigned integer", ("<integer>",))
                self.advance()
                if int(den.text) == 0:
                    raise ExpressionSyntaxError("zero denominator", den.pos)
                value = value / int(den.text)
            return Literal(GaussianRational(value))
        if tok.kind == "name":
            self.advance()
            if tok.text == "X":
                return SymX()
            if tok.text == "P":
                return SymP()
            if tok.text == "hbar":
                return SymHbar()
            if tok.text == "i":
                return ImagUnit()
            opener = self.expect("(")
            self.push(opener)
            inner = self.expr()
            self.close(")")
            return DerivX(inner) if tok.text == "Dx" else DerivP(inner)
        if tok.kind == "op":
            if tok.text == "-":
                self.advance()
                self.descend(tok)
                node = self.factor()
                self.depth -= 1
                return Neg(node)
            if tok.text == "(":
                self.advance()
                self.push(tok)
                inner = self.expr()
                self.close(")")
                return inner
            if tok.text in "[{":
                self.advance()
                self.push(tok)
                left = self.expr()
                self.expect(",")
                right = self.expr()
                self.close(_CLOSERS[tok.text])
                return Comm(left, right) if tok.text == "[" else AntiComm(left, right)
        shown = tok.text or "end of input"
        self.fail(f"unexpected {shown!r}", _BASE_START)


def parse(text: str) -> ExprNode:
    """Parse ``text`` into an expression tree.

    Raises a :class:`ParseError` subclass on malformed input; never any
    other exception.
    """
    if not isinstance(text, str):
        raise TypeError("parse expects a str")
    return _Parser(text).parse()


def evaluate(node: ExprNode) -> WeylPolynomial:
    """Evaluate an expression tree to its normal-ordered polynomial."""
    if isinstance(node, Literal):
        return WeylPolynomial.constant(node.value)
    if isinstance(node, SymX):
        return X
    if isinstance(node, SymP):
        return P
    if isinstance(node, SymHbar):
        return HBAR
    if isinstance(node, ImagUnit):
        return I
    if isinstance(node, Neg):
        return -evaluate(node.operand)
    if isinstance(node, Add):
        return evaluate(node.left) + evaluate(node.right)
    if isinstance(node, Sub):
        return evaluate(node.left) - evaluate(node.right)
    if isinstance(node, Mul):
        return evaluate(node.left) * evaluate(node.right)
    if isinstance(node, Pow):
        if node.exponent < 0:
            return WeylPolynomial.constant(HbarLaurent.hbar_power(node.exponent))
        return evaluate(node.base) ** node.exponent
    if isinstance(node, Comm):
        return commutator(evaluate(node.left), evaluate(node.right))
    if isinstance(node, AntiComm):
        return anticommutator(evaluate(node.left), evaluate(node.right))
    if isinstance(node, DerivX):
        return deriv(evaluate(node.operand), "X")
    if isinstance(node, DerivP):
        return deriv(evaluate(node.operand), "P")
    raise TypeError(f"not an expression node: {node!r}")


def normal_order(text: str) -> WeylPolynomial:
    return evaluate(parse(text))


# --- formatting ------------------------------------------------------------


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_coeff(c: GaussianRational) -> tuple[str, Optional[str]]:
    """Split a coefficient into (sign, magnitude text or None for unit)."""
    re, im = c.re, c.im
    if im == 0:
        sign = "-" if re < 0 else "+"
        mag = abs(re)
        return sign, None if mag == 1 else _fmt_rational(mag)
    if re == 0:
        sign = "-" if im < 0 else "+"
        mag = abs(im)
        return sign, "i" if mag == 1 else f"{_fmt_rational(mag)}*i"
    im_sign = "-" if im < 0 else "+"
    im_mag = abs(im)
    im_text = "i" if im_mag == 1 else f"{_fmt_rational(im_mag)}*i"
    re_text = _fmt_rational(re) if re > 0 else f"-{_fmt_rational(-re)}"
    return "+", f"({re_text} {im_sign} {im_text})"


def format_polynomial(p: WeylPolynomial) -> str:
    """Canonical text form; ``normal_order(format_polynomial(p)) == p``.

    Terms are sorted by ``(xpow, ppow)`` descending, and within a monomial
    by hbar exponent descending.
    """
    if not p:
        return "0"
    pieces = []
    for (xp, pp) in sorted(p.terms, reverse=True):
        coeff = p.terms[(xp, pp)]
        for k in sorted(coeff, reverse=True):
            sign, mag = _fmt_coeff(coeff.coeffs[k])
            factors = [] if mag is None else [mag]
            if k == 1:
                factors.append("hbar")
            elif k != 0:
                factors.append(f"hbar^{k}")
            if xp == 1:
                factors.append("X")
            elif xp:
                factors.append(f"X^{xp}")
            if pp == 1:
                factors.append("P")
            elif pp:
                factors.append(f"P^{pp}")
            pieces.append((sign, "*".join(factors) if factors else "1"))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out

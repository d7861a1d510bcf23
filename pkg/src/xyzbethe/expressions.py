"""Tiny arithmetic expression grammar for command-line parameters.

Model parameters arrive as strings like "pi/10", "1/e+i*pi/10", "0.6i" or
"pi/(5e)".  The grammar covers numeric literals (with an optional trailing
"i"), the constants pi, e, i, the operators + - * / ^, parentheses, and
implicit multiplication by juxtaposition ("5e", "2pi").
"""

from __future__ import annotations

import cmath
import math
import re

__all__ = ["parse_complex"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*|\.\d+)(?P<imag>i\b)?|(?P<name>pi|e|i)\b"
    r"|(?P<op>[-+*/^()]))"
)

_CONSTANTS = {"pi": complex(math.pi), "e": complex(math.e), "i": 1j}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise ValueError(f"bad character {text[pos]!r} in {text!r}")
        pos = match.end()
        if match.group("num") is not None:
            value = complex(float(match.group("num")))
            if match.group("imag"):
                value *= 1j
            tokens.append(("value", value))
        elif match.group("name") is not None:
            tokens.append(("value", _CONSTANTS[match.group("name")]))
        else:
            tokens.append(("op", match.group("op")))
    if text[pos:].strip():
        raise ValueError(f"trailing garbage in {text!r}")
    # juxtaposition means multiplication: "5e", "2pi", "2(1+i)", ")("
    out = []
    for tok in tokens:
        if out and (
            (tok[0] == "value" or tok == ("op", "("))
            and (out[-1][0] == "value" or out[-1] == ("op", ")"))
        ):
            out.append(("op", "*"))
        out.append(tok)
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self) -> complex:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> complex:
        value = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> complex:
        # unary minus binds looser than ^, so -2^2 = -(2^2)
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return base ** self.factor()  # right associative
        return base

    def atom(self) -> complex:
        tok = self.take()
        if tok is None:
            raise ValueError("unexpected end of expression")
        if tok[0] == "value":
            return tok[1]
        if tok == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return value
        raise ValueError(f"unexpected token {tok[1]!r}")


def parse_complex(text: str) -> complex:
    """Evaluate a parameter expression to a complex number."""
    parser = _Parser(_tokenize(text))
    value = parser.expr()
    if parser.peek() is not None:
        raise ValueError(f"unexpected token after expression in {text!r}")
    if not (cmath.isfinite(value)):
        raise ValueError(f"expression {text!r} is not finite")
    return value

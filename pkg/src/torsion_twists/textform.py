"""Text encodings shared by the CLI and JSON reports.

Rationals are written ``n/m``, elements of Q(z3) as ``r+s*z3``, Kummer elements
as ``c0+c1*t+c2*t^2``.  The parser is a small precedence-climbing evaluator
that works over any ring supplied through ``env`` and ``lift``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

__all__ = ["parse_expression", "parse_rational", "parse_cyc", "format_cyc", "TextFormatError"]


class TextFormatError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TextFormatError(f"unexpected character at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_expression(text: str, env: Dict[str, object], lift: Callable[[object], object]):
    """Evaluate an arithmetic expression with + - * / ^ and parentheses.

    Names are looked up in ``env``; integer literals go through ``lift``.
    Exponents must be integer literals (optionally negative).
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("eof", "")

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if kind and tok[0] != kind or value and tok[1] != value:
            raise TextFormatError(f"expected {value or kind}, got {tok[1] or 'end of input'} in {text!r}")
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            exp = int(take("num")[1]) * sign
            return base ** exp
        return base

    def atom():
        kind, value = peek()
        if kind == "num":
            take()
            return lift(int(value))
        if kind == "name":
            take()
            if value not in env:
                raise TextFormatError(f"unknown symbol {value!r} in {text!r}")
            return env[value]
        if (kind, value) == ("op", "("):
            take()
            val = expr()
            take("op", ")")
            return val
        raise TextFormatError(f"unexpected {value or 'end of input'} in {text!r}")

    if not tokens:
        raise TextFormatError("empty expression")
    result = expr()
    if pos != len(tokens):
        raise TextFormatError(f"trailing input {tokens[pos][1]!r} in {text!r}")
    return result


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise TextFormatError(f"not a rational number: {text!r}") from exc


def parse_cyc(text: str):
    from .field import ZETA, Cyc

    val = parse_expression(str(text), {"z3": ZETA}, lambda n: Cyc(n))
    return Cyc.coerce(val)


def format_cyc(c) -> str:
    return str(c)

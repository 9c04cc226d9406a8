"""Recursive-descent parser for the transition-symbol expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' integer] | '-' factor | '(' expr ')'
    atom   := 'a(' int ',' int ')' | 'xi(' int ',' int ')' | 'phi(' int ')'
            | 'x' | rational
    rational := int ['/' int]

Parsing yields a small tree (nested tuples) that can either be folded into a
canonical :class:`Expr` or evaluated numerically.  The numeric route is what
the oracle uses for generator values, where genuine rational functions of
``x`` such as ``1/(2 + x)`` are allowed.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import A, PHI, X, XI, Expr, ExprError, ExprZeroDivisionError, SymbolId, symbol

__all__ = ["ParseError", "parse", "parse_expr", "parse_symbol", "fold", "evaluate_tree"]

# tree nodes: ("num", Fraction) | ("sym", SymbolId) | ("neg", t) | ("pow", t, k)
#             | ("add"|"sub"|"mul"|"div", l, r)
Tree = tuple


class ParseError(ExprError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at position {pos}")


_TOKEN = re.compile(r"\s*(?:(\d+)|(xi|a|phi|x)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos, self.text)

    def integer(self) -> int:
        kind, v, pos = self.take()
        if kind != "int":
            raise ParseError(f"expected integer, found {v or 'end of input'!r}", pos, self.text)
        return int(v)

    def expr(self) -> Tree:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self) -> Tree:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.factor())
        return node

    def factor(self) -> Tree:
        kind, v, pos = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return ("neg", self.factor())
        if kind == "op" and v == "(":
            self.take()
            node = self.expr()
            self.expect(")")
        else:
            node = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            sign = 1
            if self.peek()[1] == "-" and self.peek()[0] == "op":
                self.take()
                sign = -1
            node = ("pow", node, sign * self.integer())
        return node

    def atom(self) -> Tree:
        kind, v, pos = self.take()
        if kind == "int":
            return ("num", Fraction(int(v)))
        if kind == "name":
            if v == "x":
                return ("sym", SymbolId(X))
            self.expect("(")
            i = self.integer()
            if v == "phi":
                self.expect(")")
                return ("sym", SymbolId(PHI, i))
            self.expect(",")
            j = self.integer()
            self.expect(")")
            return ("sym", SymbolId(A if v == "a" else XI, i, j))
        raise ParseError(f"unexpected {v or 'end of input'!r}", pos, self.text)


def parse(text: str) -> Tree:
    """Parse ``text`` into a tree without normalizing."""
    p = _Parser(text)
    node = p.expr()
    kind, v, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing {v!r}", pos, text)
    return node


def fold(node: Tree, n: int) -> Expr:
    tag = node[0]
    if tag == "num":
        return Expr.const(node[1], n)
    if tag == "sym":
        return symbol(node[1], n)
    if tag == "neg":
        return -fold(node[1], n)
    if tag == "pow":
        return fold(node[1], n) ** node[2]
    left, right = fold(node[1], n), fold(node[2], n)
    if tag == "add":
        return left + right
    if tag == "sub":
        return left - right
    if tag == "mul":
        return left * right
    if right.is_zero():
        raise ExprZeroDivisionError("division by an expression that normalizes to zero")
    return left / right


def parse_expr(text: str, nerve_size: int) -> Expr:
    """Parse and canonicalize an expression over ``nerve_size`` charts."""
    if nerve_size < 1:
        raise ValueError("nerve size must be positive")
    return fold(parse(text), nerve_size)


def parse_symbol(text: str) -> SymbolId:
    node = parse(text)
    if node[0] != "sym":
        raise ParseError(f"{text!r} is not a single symbol", 0, text)
    return node[1]


def evaluate_tree(node: Tree, x_value: complex, env=None) -> complex:
    """Numeric value of a tree; symbols other than ``x`` are looked up in ``env``."""
    tag = node[0]
    if tag == "num":
        return complex(node[1].numerator) / node[1].denominator
    if tag == "sym":
        sym = node[1]
        if sym.kind == X:
            return complex(x_value)
        if env is None or (sym not in env and str(sym) not in env):
            raise ExprError(f"symbol {sym} not allowed here")
        return complex(env[sym] if sym in env else env[str(sym)])
    if tag == "neg":
        return -evaluate_tree(node[1], x_value, env)
    if tag == "pow":
        return evaluate_tree(node[1], x_value, env) ** node[2]
    left = evaluate_tree(node[1], x_value, env)
    right = evaluate_tree(node[2], x_value, env)
    if tag == "add":
        return left + right
    if tag == "sub":
        return left - right
    if tag == "mul":
        return left * right
    if right == 0:
        raise ZeroDivisionError("division by zero in numeric evaluation")
    return left / right


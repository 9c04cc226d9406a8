"""Exact Laurent-polynomial expressions over the affine transition symbols.

An :class:`Expr` lives over a nerve of ``n`` charts.  Its variables are the
free generators

    A_i  = a(i, i+1)     (1 <= i <= n-1)   invertible
    XI_i = xi(i, i+1)    (1 <= i <= n-1)
    PHI_j = phi(j)       (1 <= j <= n)
    X    = x

Every other transition symbol ``a(j,k)`` / ``xi(j,k)`` is rewritten into this
chain basis by :func:`normalize`, using the gluing rule
``eta_j = a_jk * eta_k + xi_jk``.  Because the A-generators are the only
invertible variables, an expression is stored as a sparse map from exponent
vectors to exact rationals, where only A-exponents may be negative.  That map
is the canonical form: two expressions are equal iff their maps are equal.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "A", "XI", "PHI", "X", "SymbolId", "Expr",
    "ExprError", "IndexRangeError", "ExprZeroDivisionError", "NonUnitError",
    "MissingAssignmentError", "PoleError",
    "normalize", "combine", "equals", "evaluate", "symbol",
]

A, XI, PHI, X = "A", "XI", "PHI", "X"
_KINDS = (A, XI, PHI, X)

Number = Union[int, Fraction]


class ExprError(ValueError):
    pass


class IndexRangeError(ExprError):
    pass


class ExprZeroDivisionError(ExprError, ZeroDivisionError):
    pass


class NonUnitError(ExprError):
    """Raised when inverting something that is not a Laurent monomial in the A's."""


class MissingAssignmentError(ExprError, KeyError):
    pass


class PoleError(ExprError, ZeroDivisionError):
    pass


@dataclass(frozen=True, order=True)
class SymbolId:
    """A raw transition symbol, possibly not in the free-generator basis.

    ``i`` and ``j`` are chart indices: ``(j, k)`` for ``A``/``XI``, ``(j,)``
    for ``PHI`` (stored in ``i``), nothing for ``X``.
    """

    kind: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    @property
    def is_free(self) -> bool:
        if self.kind in (A, XI):
            return self.j == self.i + 1
        return True

    def check_range(self, n: int) -> None:
        idx = (self.i, self.j) if self.kind in (A, XI) else (self.i,) if self.kind == PHI else ()
        for v in idx:
            if not 1 <= v <= n:
                raise IndexRangeError(f"index {v} of {self} outside charts 1..{n}")

    def __str__(self) -> str:
        if self.kind == A:
            return f"a({self.i},{self.j})"
        if self.kind == XI:
            return f"xi({self.i},{self.j})"
        if self.kind == PHI:
            return f"phi({self.i})"
        return "x"

    @classmethod
    def parse(cls, text: str) -> "SymbolId":
        from .parser import parse_symbol

        return parse_symbol(text)


# -- variable layout ---------------------------------------------------------

def _nvars(n: int) -> int:
    return 3 * n - 1


def _var_index(sym: SymbolId, n: int) -> int:
    if sym.kind == A:
        return sym.i - 1
    if sym.kind == XI:
        return (n - 1) + sym.i - 1
    if sym.kind == PHI:
        return 2 * (n - 1) + sym.i - 1
    return 3 * n - 2


@lru_cache(maxsize=None)
def _var_symbols(n: int) -> tuple[SymbolId, ...]:
    out = [SymbolId(A, i, i + 1) for i in range(1, n)]
    out += [SymbolId(XI, i, i + 1) for i in range(1, n)]
    out += [SymbolId(PHI, j) for j in range(1, n + 1)]
    out.append(SymbolId(X))
    return tuple(out)


def _add_exps(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class Expr:
    """Canonical exact expression; immutable, hashable."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        if n < 1:
            raise ValueError("nerve size must be positive")
        self.n = n
        clean = {}
        for exps, c in (terms or {}).items():
            if c != 0:
                clean[exps] = Fraction(c)
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, value: Number, n: int) -> "Expr":
        return cls(n, {(0,) * _nvars(n): Fraction(value)})

    @classmethod
    def zero(cls, n: int) -> "Expr":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "Expr":
        return cls.const(1, n)

    @classmethod
    def generator(cls, sym: SymbolId, n: int) -> "Expr":
        if not sym.is_free:
            raise ValueError(f"{sym} is not a free generator; use normalize()")
        sym.check_range(n)
        if sym.kind in (A, XI) and sym.i >= n:
            raise IndexRangeError(f"{sym} outside the chain for n={n}")
        exps = [0] * _nvars(n)
        exps[_var_index(sym, n)] = 1
        return cls(n, {tuple(exps): Fraction(1)})

    # basic protocol
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    @property
    def canonical(self) -> bool:
        return True

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other, self.n)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.n != self.n:
                raise ExprError(f"nerve size mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Expr.const(other, self.n)
        return NotImplemented

    # arithmetic
    def __add__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Expr(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        return (-self) + other

    def __mul__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exps(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Expr(self.n, out)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        if len(self._terms) != 1:
            return False
        (exps,) = self._terms
        return all(v == 0 for v in exps[self.n - 1:])

    def inverse(self) -> "Expr":
        if self.is_zero():
            raise ExprZeroDivisionError("division by an expression that normalizes to zero")
        if not self.is_unit():
            raise NonUnitError(f"{self} is not a unit (Laurent monomial in the A-generators)")
        ((exps, c),) = self._terms.items()
        return Expr(self.n, {tuple(-v for v in exps): 1 / c})

    def __truediv__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Expr":
        return self.inverse() * other

    def __pow__(self, k: int) -> "Expr":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Expr.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # structure
    def free_symbols(self) -> set[SymbolId]:
        syms = _var_symbols(self.n)
        out = set()
        for exps in self._terms:
            out.update(syms[i] for i, v in enumerate(exps) if v)
        return out

    def constant_value(self) -> Fraction | None:
        """The rational value if the expression has no symbols, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1:
            ((exps, c),) = self._terms.items()
            if not any(exps):
                return c
        return None

    @property
    def denominator(self) -> "Expr":
        """Monomial in the A-generators clearing every negative exponent."""
        k = self.n - 1
        need = [0] * _nvars(self.n)
        for exps in self._terms:
            for i in range(k):
                need[i] = max(need[i], -exps[i])
        return Expr(self.n, {tuple(need): Fraction(1)})

    @property
    def numerator(self) -> "Expr":
        return self * self.denominator

    def subs(self, mapping: Mapping[SymbolId, "Expr"]) -> "Expr":
        """Substitute free generators by expressions (exact)."""
        repl = {_var_index(s, self.n): self._coerce(v) for s, v in mapping.items()}
        result = Expr.zero(self.n)
        for exps, c in self._terms.items():
            term = Expr.const(c, self.n)
            rest = list(exps)
            for i, v in repl.items():
                if exps[i]:
                    term = term * v ** exps[i]
                    rest[i] = 0
            monomial = Expr(self.n, {tuple(rest): Fraction(1)})
            result = result + term * monomial
        return result

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: _term_key(kv[0])))

    # rendering
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        syms = _var_symbols(self.n)
        parts = []
        for exps, c in self.items():
            parts.append(_render_term(exps, c, syms))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"Expr({str(self)!r}, n={self.n})"


def _term_key(exps: tuple[int, ...]):
    return (sum(abs(v) for v in exps), tuple(-v for v in exps))


def _render_term(exps, c: Fraction, syms) -> str:
    num, den = [], []
    for sym, v in zip(syms, exps):
        if v == 0:
            continue
        piece = str(sym) if abs(v) == 1 else f"{sym}^{abs(v)}"
        (num if v > 0 else den).append(piece)
    sign = "-" if c < 0 else ""
    c = abs(c)
    if num:
        coef = "" if c == 1 else (f"{c.numerator}*" if c.denominator == 1
                                  else f"{c.numerator}/{c.denominator}*")
        body = coef + "*".join(num)
    else:
        body = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    for d in den:
        body += f"/{d}"
    return sign + body


# -- rewrite relations ---------------------------------------------------------

def _a(j: int, k: int, n: int) -> Expr:
    if j == k:
        return Expr.one(n)
    if j < k:
        out = Expr.one(n)
        for i in range(j, k):
            out = out * Expr.generator(SymbolId(A, i, i + 1), n)
        return out
    return _a(k, j, n).inverse()


def _xi(j: int, k: int, n: int) -> Expr:
    if j == k:
        return Expr.zero(n)
    if j < k:
        out = Expr.zero(n)
        prefix = Expr.one(n)
        for i in range(j, k):
            out = out + prefix * Expr.generator(SymbolId(XI, i, i + 1), n)
            prefix = prefix * Expr.generator(SymbolId(A, i, i + 1), n)
        return out
    # xi_kj = -a_jk^{-1} xi_jk, here with roles (k, j) -> (j, k)
    return -(_a(k, j, n).inverse() * _xi(k, j, n))


@lru_cache(maxsize=4096)
def symbol(sym: SymbolId, n: int) -> Expr:
    """Normal form of a raw symbol in the chain basis."""
    sym.check_range(n)
    if sym.kind == A:
        return _a(sym.i, sym.j, n)
    if sym.kind == XI:
        return _xi(sym.i, sym.j, n)
    return Expr.generator(sym, n)


def normalize(e, n: int | None = None) -> Expr:
    """Canonical form of ``e``.

    ``e`` may be an :class:`Expr` (returned as is: storage is canonical), a raw
    :class:`SymbolId`, or a parse tree from :mod:`grauert_cert.expr.parser`.
    """
    if isinstance(e, Expr):
        return e
    if n is None:
        raise ExprError("nerve size required to normalize a raw symbol or tree")
    if isinstance(e, SymbolId):
        return symbol(e, n)
    from .parser import fold

    return fold(e, n)


_OPS = ("add", "sub", "mul", "div", "neg", "inv", "int_pow")


def combine(op: str, operands: Iterable) -> Expr:
    ops = list(operands)
    if op not in _OPS:
        raise ExprError(f"unknown op {op!r}")
    if op in ("neg", "inv"):
        (a,) = ops
        return -a if op == "neg" else a.inverse()
    if op == "int_pow":
        a, k = ops
        return a ** int(k)
    if op in ("sub", "div"):
        a, b = ops
        return a - b if op == "sub" else a / b
    head, *rest = ops
    for b in rest:
        head = head + b if op == "add" else head * b
    return head


def equals(a: Expr, b: Expr) -> bool:
    if a.n != b.n:
        raise ExprError("expressions over different nerves")
    return (a - b).is_zero()


def _env_lookup(env: Mapping, sym: SymbolId):
    if sym in env:
        return env[sym]
    key = str(sym)
    if key in env:
        return env[key]
    raise MissingAssignmentError(f"no value assigned to {sym}")


def evaluate(e: Expr, env: Mapping, x_value: complex = 0j) -> complex:
    """Substitute complex values for the free generators.

    ``env`` keys may be :class:`SymbolId` or their text form (``"a(1,2)"``).
    The coordinate ``x`` takes ``x_value``.
    """
    syms = _var_symbols(e.n)
    used = sorted(e.free_symbols())
    values = [0j] * len(syms)
    for s in used:
        if s.kind == X:
            v = complex(x_value)
        else:
            v = complex(_env_lookup(env, s))
            if s.kind == A and v == 0:
                raise PoleError(f"{s} assigned 0")
        values[_var_index(s, e.n)] = v
    total = 0j
    for exps, c in e._terms.items():
        t = complex(c.numerator) / c.denominator
        for i, p in enumerate(exps):
            if p:
                t *= values[i] ** p
        total += t
    if cmath.isnan(total):
        raise PoleError("evaluation produced NaN")
    return total

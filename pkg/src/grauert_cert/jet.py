"""Truncated power series in a defining function theta_j with exact coefficients.

A :class:`Jet` is ``c0 + c1*t + ... + cN*t^N + O(t^(N+1))`` where ``t`` is the
defining function of the chart named by ``chart``.  Substitutions always fix
the origin ``t = 0`` (the curve Y), so :func:`compose` insists on an inner
series without constant term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .expr import Expr, NonUnitError, evaluate

__all__ = [
    "Jet", "JetError", "OriginError", "DEFAULT_ORDER",
    "from_rational", "jet_arith", "compose", "coefficient", "invert_series",
]

DEFAULT_ORDER = 3


class JetError(ValueError):
    pass


class OriginError(JetError):
    """Substitution or inversion of a series that does not fix the origin."""


@dataclass(frozen=True)
class Jet:
    chart: int
    coeffs: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise JetError("truncation order must be at least 1")
        ns = {c.n for c in self.coeffs}
        if len(ns) != 1:
            raise JetError("coefficients over different nerves")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def n(self) -> int:
        return self.coeffs[0].n

    @classmethod
    def from_coeffs(cls, chart: int, coeffs: Sequence, order: int, n: int) -> "Jet":
        """Pad or truncate ``coeffs`` to ``order``; ints are lifted to constants."""
        out = []
        for m in range(order + 1):
            c = coeffs[m] if m < len(coeffs) else 0
            out.append(c if isinstance(c, Expr) else Expr.const(c, n))
        return cls(chart, tuple(out))

    @classmethod
    def constant(cls, value, chart: int, order: int, n: int) -> "Jet":
        return cls.from_coeffs(chart, [value], order, n)

    @classmethod
    def variable(cls, chart: int, order: int, n: int) -> "Jet":
        """The identity series ``t``."""
        return cls.from_coeffs(chart, [0, 1], order, n)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def retag(self, chart: int) -> "Jet":
        return Jet(chart, self.coeffs)

    def _check(self, other: "Jet") -> None:
        if self.chart != other.chart:
            raise JetError(f"chart mismatch: theta_{self.chart} vs theta_{other.chart}")
        if self.order != other.order:
            raise JetError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet(self.chart, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet(self.chart, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Jet":
        return Jet(self.chart, tuple(-c for c in self.coeffs))

    def scale(self, c: Expr) -> "Jet":
        return Jet(self.chart, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (Expr, int)):
            return self.scale(other)
        self._check(other)
        N = self.order
        out = []
        for m in range(N + 1):
            acc = Expr.zero(self.n)
            for i in range(m + 1):
                a, b = self.coeffs[i], other.coeffs[m - i]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return Jet(self.chart, tuple(out))

    def __truediv__(self, other: "Jet") -> "Jet":
        return from_rational(self, other)

    def __pow__(self, k: int) -> "Jet":
        if k < 0:
            return from_rational(Jet.constant(1, self.chart, self.order, self.n), self) ** (-k)
        result = Jet.constant(1, self.chart, self.order, self.n)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, env: Mapping, theta: complex, x_value: complex = 0j) -> complex:
        """Numeric value of the truncated polynomial at ``t = theta``."""
        total = 0j
        for c in reversed(self.coeffs):
            total = total * theta + evaluate(c, env, x_value)
        return total

    def __str__(self) -> str:
        out = str(self.coeffs[0])
        for m, c in enumerate(self.coeffs[1:], start=1):
            s = str(c)
            sign = " + "
            if " " in s:
                s = f"({s})"
            elif s.startswith("-"):
                sign, s = " - ", s[1:]
            out += sign + (f"{s}*t" if m == 1 else f"{s}*t^{m}")
        return out + f" [chart {self.chart}, order {self.order}]"


def from_rational(numer: Jet, denom: Jet) -> Jet:
    """Truncated quotient ``numer/denom``; the constant term of ``denom`` must be a unit."""
    numer._check(denom)
    d0 = denom.coeffs[0]
    if not d0.is_unit():
        raise NonUnitError(f"constant term {d0} of the divisor is not a unit")
    d0_inv = d0.inverse()
    q: list[Expr] = []
    for m in range(numer.order + 1):
        acc = numer.coeffs[m]
        for i in range(1, m + 1):
            if denom.coeffs[i] and q[m - i]:
                acc = acc - denom.coeffs[i] * q[m - i]
        q.append(acc * d0_inv)
    return Jet(numer.chart, tuple(q))


def jet_arith(op: str, a: Jet, b: Jet) -> Jet:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return from_rational(a, b)
    raise JetError(f"unknown op {op!r}")


def compose(outer: Jet, inner: Jet) -> Jet:
    """``outer(inner(t))`` truncated; the result lives in ``inner``'s chart."""
    if outer.order != inner.order:
        raise JetError(f"order mismatch: {outer.order} vs {inner.order}")
    if not inner.coeffs[0].is_zero():
        raise OriginError("inner series has a nonzero constant term")
    result = Jet.constant(outer.coeffs[-1], inner.chart, inner.order, inner.n)
    for c in reversed(outer.coeffs[:-1]):
        result = result * inner + Jet.constant(c, inner.chart, inner.order, inner.n)
    return result


def coefficient(j: Jet, m: int) -> Expr:
    if not 0 <= m <= j.order:
        raise IndexError(f"coefficient index {m} outside 0..{j.order}")
    return j.coeffs[m]


def invert_series(j: Jet, chart: int | None = None) -> Jet:
    """Compositional inverse ``g`` with ``g(j(t)) = t + O(t^(N+1))``.

    The result is a series in the variable that ``j`` takes values in; pass
    ``chart`` to tag it (defaults to ``j.chart``).
    """
    c0, c1 = j.coeffs[0], j.coeffs[1]
    if not c0.is_zero():
        raise OriginError("series to invert has a nonzero constant term")
    if not c1.is_unit():
        raise NonUnitError(f"linear coefficient {c1} is not a unit")
    N, n = j.order, j.n
    c1_inv = c1.inverse()
    # powers[i] = j^i, so [g(j)]_m = sum_i g_i [j^i]_m
    powers = [None, j]
    for _ in range(2, N + 1):
        powers.append(powers[-1] * j)
    g = [Expr.zero(n), c1_inv]
    for m in range(2, N + 1):
        acc = Expr.zero(n)
        for i in range(1, m):
            if g[i]:
                acc = acc + g[i] * powers[i].coeffs[m]
        g.append(-acc * c1_inv ** m)
    return Jet(j.chart if chart is None else chart, tuple(g))

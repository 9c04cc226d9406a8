"""Neron-Severi numerics of the ruled surface and Riemann-Roch on the base curve."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["NSClass", "Y", "FIBER", "intersect", "class_L", "euler_char", "intersection_matrix"]


@dataclass(frozen=True)
class NSClass:
    """``alpha * [Y] + beta * [f]``."""

    alpha: int
    beta: int

    def __add__(self, other: "NSClass") -> "NSClass":
        return NSClass(self.alpha + other.alpha, self.beta + other.beta)

    def __rmul__(self, k: int) -> "NSClass":
        return NSClass(k * self.alpha, k * self.beta)

    def __str__(self) -> str:
        return f"{self.alpha}*Y + {self.beta}*f"


Y = NSClass(1, 0)
FIBER = NSClass(0, 1)


def intersection_matrix(d: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Gram matrix in the basis (Y, f): ``Y^2 = -d``, ``Y.f = 1``, ``f^2 = 0``."""
    return ((-d, 1), (1, 0))


def intersect(c1: NSClass, c2: NSClass, d: int) -> int:
    g = intersection_matrix(d)
    u, v = (c1.alpha, c1.beta), (c2.alpha, c2.beta)
    return sum(u[r] * g[r][c] * v[c] for r in range(2) for c in range(2))


def class_L(d: int) -> NSClass:
    """``L = p*F + [Y]`` with ``p*F`` numerically ``d`` fibres."""
    return Y + d * FIBER


def euler_char(g: int, d: int) -> int:
    """``h^0 - h^1`` of a degree-d line bundle on a genus-g curve."""
    if g < 0:
        raise ValueError(f"genus must be non-negative, got {g}")
    return d - g + 1

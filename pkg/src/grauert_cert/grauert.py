"""Symbolic model of the compactified affine bundle over an abstract nerve.

Charts ``1..n`` form a full simplex.  On the overlap of charts j and k the
fibre coordinates glue by ``eta_j = a_jk * eta_k + xi_jk``; near the section at
infinity the defining function is ``theta_j = 1/eta_j``.  Line bundles are
stored as transition jets ``g_jk = e_k/e_j`` written in ``theta_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Mapping

from .expr import XI, Expr, NonUnitError, SymbolId, normalize
from .jet import DEFAULT_ORDER, Jet, compose, from_rational

__all__ = [
    "Nerve", "GrauertModel", "LineBundleCochain", "FlatCochain", "ModelError",
    "build_model", "theta_transition", "bundle_pullback_F", "bundle_divisor_Y",
    "bundle_combine", "bundle_L", "bundle_cocycle_residual", "restrict_to_Y",
    "trivial_bundle", "perturb_transition",
]


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Nerve:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ModelError(f"need at least 3 charts for triple overlaps, got {self.n}")

    @property
    def charts(self) -> range:
        return range(1, self.n + 1)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(permutations(self.charts, 2))

    @property
    def unordered_pairs(self) -> list[tuple[int, int]]:
        return list(combinations(self.charts, 2))

    @property
    def triples(self) -> list[tuple[int, int, int]]:
        return list(combinations(self.charts, 3))


@dataclass(frozen=True)
class GrauertModel:
    nerve: Nerve
    genus: int = 2
    deg_f: int = 1
    order: int = DEFAULT_ORDER

    @property
    def n(self) -> int:
        return self.nerve.n

    def a(self, j: int, k: int) -> Expr:
        return normalize(SymbolId("A", j, k), self.n)

    def xi(self, j: int, k: int) -> Expr:
        return normalize(SymbolId(XI, j, k), self.n)

    @property
    def free_generators(self) -> list[SymbolId]:
        gens = [SymbolId("A", i, i + 1) for i in range(1, self.n)]
        return gens + [SymbolId(XI, i, i + 1) for i in range(1, self.n)]

    def const(self, value, chart: int) -> Jet:
        return Jet.constant(value, chart, self.order, self.n)

    def variable(self, chart: int) -> Jet:
        return Jet.variable(chart, self.order, self.n)


def build_model(n: int = 3, genus: int = 2, deg_f: int = 1, order: int = DEFAULT_ORDER) -> GrauertModel:
    if genus < 2:
        raise ModelError(f"genus must be at least 2, got {genus}")
    if order < 1:
        raise ModelError(f"truncation order must be at least 1, got {order}")
    return GrauertModel(Nerve(n), genus, deg_f, order)


@lru_cache(maxsize=None)
def theta_transition(m: GrauertModel, j: int, k: int) -> Jet:
    """``theta_j = theta_k / (a_jk + xi_jk theta_k)`` as a series in theta_k."""
    if j == k:
        raise ModelError("theta transition needs two distinct charts")
    numer = m.variable(k)
    denom = Jet.from_coeffs(k, [m.a(j, k), m.xi(j, k)], m.order, m.n)
    return from_rational(numer, denom)


def _in_chart(m: GrauertModel, g: Jet, j: int) -> Jet:
    """Re-express a series in theta_k as a series in theta_j."""
    if g.chart == j:
        return g
    return compose(g, theta_transition(m, g.chart, j))


@dataclass(frozen=True)
class LineBundleCochain:
    model: GrauertModel
    transitions: Mapping[tuple[int, int], Jet] = field(hash=False)
    name: str = field(default="", compare=False)

    def __getitem__(self, pair: tuple[int, int]) -> Jet:
        return self.transitions[pair]

    def compatibility_defect(self, j: int, k: int) -> Jet:
        """``g_kj`` (moved to chart j) times ``g_jk`` minus 1."""
        m = self.model
        back = _in_chart(m, self.transitions[(k, j)], j)
        return back * self.transitions[(j, k)] - m.const(1, j)


@dataclass(frozen=True)
class FlatCochain:
    constants: Mapping[tuple[int, int], Expr] = field(hash=False)
    trivial: bool = False

    def cocycle_defects(self, triples) -> dict[tuple[int, int, int], Expr]:
        out = {}
        for j, k, l in triples:
            c = self.constants
            out[(j, k, l)] = c[(j, k)] * c[(k, l)] - c[(j, l)]
        return out


def _cochain(m: GrauertModel, build, name: str) -> LineBundleCochain:
    return LineBundleCochain(m, {(j, k): build(j, k) for j, k in m.nerve.pairs}, name)


def trivial_bundle(m: GrauertModel) -> LineBundleCochain:
    return _cochain(m, lambda j, k: m.const(1, j), "O")


def bundle_pullback_F(m: GrauertModel) -> LineBundleCochain:
    """Frames ``m_j = a_jk^{-1} m_k`` give ``p*m_k / p*m_j = a_jk``."""
    return _cochain(m, lambda j, k: m.const(m.a(j, k), j), "p*F")


def bundle_divisor_Y(m: GrauertModel) -> LineBundleCochain:
    """Canonical-section frames ``v_j theta_j = v_k theta_k`` of [Y]."""

    def build(j, k):
        in_k = from_rational(m.const(1, k), Jet.from_coeffs(k, [m.a(j, k), m.xi(j, k)], m.order, m.n))
        return _in_chart(m, in_k, j)

    return _cochain(m, build, "[Y]")


def bundle_L(m: GrauertModel) -> LineBundleCochain:
    """``e_k/e_j = a_jk / (a_jk + xi_jk theta_k)``, expanded in theta_j."""

    def build(j, k):
        a = m.a(j, k)
        in_k = from_rational(m.const(a, k), Jet.from_coeffs(k, [a, m.xi(j, k)], m.order, m.n))
        return _in_chart(m, in_k, j)

    return _cochain(m, build, "L")


def bundle_combine(op: str, a: LineBundleCochain, b: LineBundleCochain | None = None) -> LineBundleCochain:
    if op == "tensor":
        if b is None or a.model != b.model:
            raise ModelError("tensor needs two bundles over the same model")
        trans = {p: a.transitions[p] * b.transitions[p] for p in a.transitions}
        return LineBundleCochain(a.model, trans, f"{a.name} (x) {b.name}")
    if op == "dual":
        m = a.model
        trans = {p: from_rational(m.const(1, g.chart), g) for p, g in a.transitions.items()}
        return LineBundleCochain(m, trans, f"({a.name})^-1")
    raise ModelError(f"unknown bundle op {op!r}")


def bundle_cocycle_residual(b: LineBundleCochain, triple: tuple[int, int, int]) -> Jet:
    """``g_jk * (g_kl o theta_k(theta_j)) / g_jl - 1`` in chart j.

    A corrupted ``g_jl`` may have a non-invertible constant term; the defect is
    then reported undivided as ``g_jk * (g_kl o ...) - g_jl``, which vanishes
    under the same condition.
    """
    j, k, l = triple
    m = b.model
    g_kl = _in_chart(m, b.transitions[(k, l)], j)
    prod = b.transitions[(j, k)] * g_kl
    g_jl = b.transitions[(j, l)]
    if not g_jl.coeffs[0].is_unit():
        return prod - g_jl
    return from_rational(prod, g_jl) - m.const(1, j)


def restrict_to_Y(b: LineBundleCochain) -> FlatCochain:
    consts = {p: g.coeffs[0] for p, g in b.transitions.items()}
    trivial = all(c == 1 for c in consts.values())
    return FlatCochain(consts, trivial)


def perturb_transition(b: LineBundleCochain, pair: tuple[int, int], generator: SymbolId,
                       delta=1, scale=None) -> LineBundleCochain:
    """Replace ``generator`` by ``generator + delta`` in one transition only.

    With ``scale`` the replacement is ``scale * generator`` instead; use it for
    an A-generator that appears inverted, since ``1/(A + delta)`` is not a
    Laurent monomial and cannot be represented.
    """
    m = b.model
    g0 = normalize(generator, m.n)
    repl = {generator: g0 * scale if scale is not None else g0 + delta}
    g = b.transitions[pair]
    trans = dict(b.transitions)
    try:
        trans[pair] = Jet(g.chart, tuple(c.subs(repl) for c in g.coeffs))
    except NonUnitError as exc:
        raise ModelError(f"cannot shift {generator} in {pair}: {exc}; pass scale instead") from exc
    return LineBundleCochain(m, trans, f"{b.name} (perturbed {pair})")

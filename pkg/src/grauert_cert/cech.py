"""Cech 1-cochains along Y with values in the conormal bundle.

A conormal cochain entry ``c_jk`` stands for the section ``c_jk * dtheta_j`` on
the overlap ``W_jk``.  On Y the frames transform by ``dtheta_k = a_jk dtheta_j``;
that factor is read off the linear coefficient of ``theta_k(theta_j)`` rather
than typed in, so the frame bookkeeping is itself checked against the jets.
The pullback frames of F transform the same way (``m_k = a_jk m_j``), which is
what makes relabelling ``dtheta_j -> m_j`` well defined.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .expr import PHI, Expr, SymbolId, normalize
from .grauert import (
    GrauertModel, LineBundleCochain, bundle_pullback_F, restrict_to_Y, theta_transition,
)

__all__ = [
    "ConormalCochain", "ZeroCochain", "FCochain", "ReductionReport",
    "CochainError", "NotNormalizedError",
    "conormal_factor", "frame_factor", "extract_u1", "cocycle_residual",
    "coboundary", "to_F_frame", "coboundary_reduction", "formal_phi",
]


class CochainError(ValueError):
    pass


class NotNormalizedError(CochainError):
    """The restriction to Y is not the identity cochain."""


@lru_cache(maxsize=None)
def conormal_factor(m: GrauertModel, j: int, k: int) -> Expr:
    """``dtheta_k / dtheta_j`` on Y."""
    if j == k:
        return Expr.one(m.n)
    return theta_transition(m, k, j).coeffs[1]


@lru_cache(maxsize=None)
def frame_factor(m: GrauertModel, j: int, k: int) -> Expr:
    """``m_k / m_j`` for the pulled-back frames of F."""
    if j == k:
        return Expr.one(m.n)
    return bundle_pullback_F(m).transitions[(j, k)].coeffs[0]


def _render(entries, frame: str) -> str:
    return "\n".join(f"({j},{k}): {entries[(j, k)]} {frame}_{j}" for j, k in sorted(entries))


@dataclass(frozen=True)
class ConormalCochain:
    model: GrauertModel
    entries: Mapping[tuple[int, int], Expr] = field(hash=False)

    def __getitem__(self, pair):
        return self.entries[pair]

    def __add__(self, other: "ConormalCochain") -> "ConormalCochain":
        return ConormalCochain(self.model, {p: c + other.entries[p] for p, c in self.entries.items()})

    def __neg__(self) -> "ConormalCochain":
        return ConormalCochain(self.model, {p: -c for p, c in self.entries.items()})

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.entries.values())

    def antisymmetry_defects(self) -> dict[tuple[int, int], Expr]:
        """``c_kj * (dtheta_k/dtheta_j) + c_jk`` for each unordered pair."""
        return {
            (j, k): self.entries[(k, j)] * conormal_factor(self.model, j, k) + self.entries[(j, k)]
            for j, k in self.model.nerve.unordered_pairs
        }

    def render(self) -> str:
        return _render(self.entries, "d_theta")


@dataclass(frozen=True)
class FCochain:
    model: GrauertModel
    entries: Mapping[tuple[int, int], Expr] = field(hash=False)

    def __getitem__(self, pair):
        return self.entries[pair]

    def __add__(self, other: "FCochain") -> "FCochain":
        return FCochain(self.model, {p: c + other.entries[p] for p, c in self.entries.items()})

    def antisymmetry_defects(self) -> dict[tuple[int, int], Expr]:
        return {
            (j, k): self.entries[(k, j)] * frame_factor(self.model, j, k) + self.entries[(j, k)]
            for j, k in self.model.nerve.unordered_pairs
        }

    def render(self) -> str:
        return _render(self.entries, "m")


@dataclass(frozen=True)
class ZeroCochain:
    model: GrauertModel
    entries: Mapping[int, Expr] = field(hash=False)

    def __getitem__(self, j):
        return self.entries[j]


def formal_phi(m: GrauertModel) -> ZeroCochain:
    """The 0-cochain of formal unknowns ``phi_j``."""
    return ZeroCochain(m, {j: normalize(SymbolId(PHI, j), m.n) for j in m.nerve.charts})


def extract_u1(b: LineBundleCochain) -> ConormalCochain:
    """Linear jet coefficients ``f_kj,1`` of a bundle trivial along Y."""
    flat = restrict_to_Y(b)
    if not flat.trivial:
        bad = next(p for p, t in sorted(flat.constants.items()) if t != 1)
        raise NotNormalizedError(
            f"restriction to Y is not normalized: t{bad} = {flat.constants[bad]}")
    return ConormalCochain(b.model, {p: g.coeffs[1] for p, g in b.transitions.items()})


def cocycle_residual(c: ConormalCochain, triple: tuple[int, int, int]) -> Expr:
    """``c_jk + a_jk c_kl - c_jl`` in the frame dtheta_j."""
    j, k, l = triple
    return c[(j, k)] + conormal_factor(c.model, j, k) * c[(k, l)] - c[(j, l)]


def coboundary(phi: ZeroCochain) -> ConormalCochain:
    """``(delta phi)_jk = phi_k (dtheta_k/dtheta_j) - phi_j``."""
    m = phi.model
    return ConormalCochain(m, {
        (j, k): phi[k] * conormal_factor(m, j, k) - phi[j] for j, k in m.nerve.pairs
    })


def to_F_frame(c: ConormalCochain) -> FCochain:
    """Relabel ``dtheta_j -> m_j``; valid because both frames carry the factor a_jk."""
    return FCochain(c.model, dict(c.entries))


def _f_coboundary(phi: ZeroCochain) -> FCochain:
    m = phi.model
    return FCochain(m, {
        (j, k): phi[k] * frame_factor(m, j, k) - phi[j] for j, k in m.nerve.pairs
    })


@dataclass
class ReductionReport:
    """Outcome of reducing ``[u1] = 0`` to the vanishing of ``[xi]``."""

    pairs: int
    degenerate: bool
    system: dict[tuple[int, int], Expr]
    conormal_system_ok: bool
    f_frame_system_ok: bool
    frames_agree: bool
    hypothesis: str
    conclusion: str

    @property
    def verified(self) -> bool:
        return self.conormal_system_ok and self.f_frame_system_ok and self.frames_agree

    def as_payload(self) -> dict:
        return {
            "pairs": self.pairs,
            "degenerate": self.degenerate,
            "system": {f"{j},{k}": f"{e} = 0" for (j, k), e in sorted(self.system.items())},
            "conormal_system_ok": self.conormal_system_ok,
            "f_frame_system_ok": self.f_frame_system_ok,
            "frames_agree": self.frames_agree,
            "conclusion": self.conclusion,
        }


def coboundary_reduction(c: ConormalCochain) -> ReductionReport:
    """Show that ``delta(phi) = c`` is the system ``phi_k a_jk - phi_j = -xi_jk``.

    ``c`` must be the obstruction cochain of L (entries ``-xi_jk``) or zero.
    The reduction is checked twice: in the conormal frame and, independently,
    in the pulled-back frames of F, where it reads ``delta{g_j m_j} = {-xi_jk m_j}``.
    """
    m = c.model
    pairs = m.nerve.pairs
    degenerate = c.is_zero()
    if not degenerate and any(c[(j, k)] != -m.xi(j, k) for j, k in pairs):
        raise CochainError("cochain is neither zero nor the obstruction cochain of L")
    phi = formal_phi(m)
    a = m.a
    rhs = {(j, k): (Expr.zero(m.n) if degenerate else -m.xi(j, k)) for j, k in pairs}
    # target system written directly from the transition symbols
    system = {(j, k): phi[k] * a(j, k) - phi[j] - rhs[(j, k)] for j, k in pairs}

    delta = coboundary(phi)
    conormal_ok = all(delta[p] - c[p] == system[p] for p in pairs)

    f_delta = _f_coboundary(phi)
    f_target = to_F_frame(c)
    f_ok = all(f_delta[p] - f_target[p] == system[p] for p in pairs)
    frames_agree = all(conormal_factor(m, j, k) == frame_factor(m, j, k) for j, k in pairs)

    if degenerate:
        conclusion = "class is zero: phi = 0 solves the coboundary system"
    else:
        conclusion = "u1 = 0 iff [xi] = 0; with [xi] != 0 assumed, u1 != 0"
    return ReductionReport(
        pairs=len(pairs),
        degenerate=degenerate,
        system=system,
        conormal_system_ok=conormal_ok,
        f_frame_system_ok=f_ok,
        frames_agree=frames_agree,
        hypothesis="" if degenerate else "[xi] != 0 in H^1(R, O(F))",
        conclusion=conclusion,
    )

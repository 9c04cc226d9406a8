"""Certificate assembly: every check of the argument becomes a step with a status.

Statuses, strongest first: ``verified-symbolic``, ``verified-numeric``,
``cited-rule`` (an imported theorem, never re-proved here) and
``assumed-hypothesis``.  A step that was run and did not hold is ``failed``.
The verdict carries the weakest status of all steps so the report never
claims more than was machine-checked.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from ..cech import (
    CochainError, ConormalCochain, coboundary_reduction, cocycle_residual, conormal_factor,
    extract_u1, frame_factor,
)
from ..expr import ExprError
from ..grauert import (
    GrauertModel, LineBundleCochain, build_model, bundle_combine, bundle_divisor_Y,
    bundle_L, bundle_pullback_F, bundle_cocycle_residual, restrict_to_Y, theta_transition,
)
from ..jet import JetError, invert_series, compose
from ..oracle import (
    OracleConfig, OracleError, TOL_EXACT, instantiate, run_checks,
)
from .lattice import FIBER, Y, class_L, euler_char, intersect
from .rules import rule_path

__all__ = [
    "VERIFIED_SYMBOLIC", "VERIFIED_NUMERIC", "CITED", "ASSUMED", "FAILED", "STATUS_RANK",
    "CertStep", "Certificate", "Reports", "CITATIONS",
    "riemann_roch_chain", "nef_big_certificate", "collect_reports", "assemble_certificate",
    "verify", "VERDICT",
]

VERIFIED_SYMBOLIC = "verified-symbolic"
VERIFIED_NUMERIC = "verified-numeric"
CITED = "cited-rule"
ASSUMED = "assumed-hypothesis"
FAILED = "failed"
STATUS_RANK = {VERIFIED_SYMBOLIC: 4, VERIFIED_NUMERIC: 3, CITED: 2, ASSUMED: 1, FAILED: 0}

VERDICT = "nef, big, not semipositive"

# Imported results, keyed by the family they belong to in the report.
CITATIONS = {
    "obstruction-criterion": "Koike, Theorem 1.4 (Theorem 2.13): u1(Y,X,L) != 0 and L|_Y "
                             "topologically trivial imply L is not semipositive",
    "degree-positivity": "Griffiths-Harris, Proposition p.148: a degree-one bundle on a curve "
                         "is positive",
    "bigness-criterion": "Demailly, Corollary 8.4: nef with positive self-intersection is big",
    "effective-intersection": "effective-intersection rule: [Y].G >= 0 for an irreducible curve "
                              "G != Y, = 0 iff G misses Y",
}


@dataclass
class CertStep:
    id: str
    statement: str
    status: str
    payload: dict = field(default_factory=dict)
    citation: str | None = None
    children: list["CertStep"] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUS_RANK:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == CITED and not self.citation:
            raise ValueError(f"cited step {self.id} needs a citation")

    def flatten(self) -> list["CertStep"]:
        out = [self]
        for c in self.children:
            out.extend(c.flatten())
        return out

    def as_dict(self) -> dict:
        return {"id": self.id, "statement": self.statement, "status": self.status,
                "payload": self.payload, "citation": self.citation}

    @property
    def ok(self) -> bool:
        return self.status != FAILED


def _step(id, statement, ok, payload=None, status=VERIFIED_SYMBOLIC, **kw) -> CertStep:
    return CertStep(id, statement, status if ok else FAILED, payload or {}, **kw)


def _failed(id, statement, exc: Exception) -> CertStep:
    return CertStep(id, statement, FAILED, {"error": f"{type(exc).__name__}: {exc}"})


@dataclass
class Certificate:
    verdict: str
    status: str
    steps: list[CertStep]

    @property
    def failed_step(self) -> CertStep | None:
        return next((s for s in self.steps if s.status == FAILED), None)

    @property
    def ok(self) -> bool:
        return self.status != FAILED

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "status": self.status,
                "steps": [s.as_dict() for s in self.steps]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        data = json.loads(text)
        steps = [CertStep(s["id"], s["statement"], s["status"], s["payload"], s["citation"])
                 for s in data["steps"]]
        return cls(data["verdict"], data["status"], steps)

    def cited_families(self) -> list[str]:
        fams = []
        for s in self.steps:
            fam = s.payload.get("family") if s.status == CITED else None
            if fam and fam not in fams:
                fams.append(fam)
        return fams

    def to_markdown(self) -> str:
        lines = ["# Certificate: Grauert's example", ""]
        lines.append(f"**Verdict:** {self.verdict}  ")
        lines.append(f"**Status:** {self.status}  ")
        if self.ok:
            hyps = [s.statement for s in self.steps if s.status == ASSUMED]
            fams = self.cited_families()
            lines.append(f"**Modulo hypotheses:** {'; '.join(hyps) or 'none'}  ")
            lines.append(f"**Modulo cited rules:** {'; '.join(fams) or 'none'}")
        else:
            lines.append(f"**First failing step:** `{self.failed_step.id}`")
        current = None
        for s in self.steps:
            section = SECTIONS.get(s.id.split(".")[0], s.id.split(".")[0])
            if section != current:
                lines += ["", f"## {section}", ""]
                current = section
            line = f"- [{s.status}] `{s.id}`: {s.statement}"
            if s.citation:
                line += f" (cited: {s.citation})"
            lines.append(line)
            for key, value in s.payload.items():
                lines.append(f"    - {key}: {_md_value(value)}")
        return "\n".join(lines) + "\n"


def _md_value(value) -> str:
    if isinstance(value, dict):
        return "; ".join(f"{k}: {_md_value(v)}" for k, v in value.items())
    if isinstance(value, list) and value and all(isinstance(v, int) for v in value):
        return "(" + ",".join(map(str, value)) + ")"
    if isinstance(value, list):
        return " | ".join(_md_value(v) for v in value) if value else "none"
    return str(value)


SECTIONS = {
    "riemann-roch": "Riemann-Roch on the base curve",
    "bundle-cocycle": "Transition cochains of p*F, [Y] and L",
    "normal-bundle": "Normal bundle of Y",
    "restriction": "Restriction of L to Y",
    "obstruction": "First obstruction cocycle",
    "numeric": "Numeric cross-check",
    "reduction": "Coboundary reduction",
    "hypothesis": "Coboundary reduction",
    "nef-big": "Nef and big",
    "not-semipositive": "Not semipositive",
}


# -- steps on the base curve and the surface ----------------------------------

def riemann_roch_chain(g: int) -> CertStep:
    """``h^1 >= h^0 >= 1`` for ``F = [p]`` on a genus-g curve; needs g >= 2."""
    chi = euler_char(g, 1)
    # constant 1 is a section of O([p]): div(1) + p = p has coefficients >= 0
    divisor = {"p": 0 + 1}
    sections = CertStep(
        "riemann-roch.sections", "h0(O([p])) >= 1: div(1) + p is effective",
        VERIFIED_SYMBOLIC if min(divisor.values()) >= 0 else FAILED,
        {"divisor_of_1_plus_p": divisor},
    )
    euler = _step("riemann-roch.euler", "h0 - h1 = 1 - g + deg F = 2 - g",
                  chi == 2 - g, {"genus": g, "deg_F": 1, "chi": chi})
    ok = chi <= 0
    payload = {"genus": g, "chi": chi, "h1_minus_h0": -chi,
               "h1_at_least": 1 - chi if ok else None}
    return CertStep(
        "riemann-roch", "h1(O_R(F)) >= h0(O_R(F)) >= 1, so H^1(R, O_R(F)) != 0",
        VERIFIED_SYMBOLIC if ok and sections.ok and euler.ok else FAILED,
        payload if ok else {**payload, "error": f"2 - g = {chi} > 0 breaks the chain (g < 2)"},
        children=[sections, euler],
    )


def nef_big_certificate(d: int) -> CertStep:
    """Nefness by the case split over curves, bigness by self-intersection."""
    if d < 1:
        raise ValueError(f"deg F must be positive, got {d}")
    L = class_L(d)
    l_y, l_f, l_l = intersect(L, Y, d), intersect(L, FIBER, d), intersect(L, L, d)
    chain = rule_path("positive", "nef")
    children = [
        _step("nef-big.L-dot-Y", "case G = Y: L.Y = deg F - deg F = 0 >= 0", l_y == 0,
              {"L.Y": l_y, "Y.Y": intersect(Y, Y, d)}, status=VERIFIED_NUMERIC),
        _step("nef-big.L-dot-f", "fibres: L.f = Y.f + deg F (f.f) = 1 + 0 = 1 > 0", l_f == 1,
              {"L.f": l_f}, status=VERIFIED_NUMERIC),
        CertStep(
            "nef-big.pullback-nef",
            "case G != Y: deg F > 0 makes F positive, hence p*F semipositive and nef, p*F.G >= 0",
            CITED,
            {"family": "figure-1", "deg_F": d,
             "rules": [r.rule_id for r in chain],
             "path": ["positive"] + [r.target for r in chain]},
            citation="; ".join([CITATIONS["degree-positivity"]] + [r.citation for r in chain]),
        ),
        CertStep(
            "nef-big.effective",
            "case G != Y: [Y].G > 0 if G meets Y, [Y].G = 0 if G misses Y",
            CITED, {"family": "effective-intersection",
                    "subcases": ["G meets Y: [Y].G > 0", "G misses Y: [Y].G = 0"]},
            citation=CITATIONS["effective-intersection"],
        ),
        _step("nef-big.self-intersection", f"L^2 = (p*F)^2 + deg F = 0 + {d} = {d} > 0",
              l_l == d and l_l > 0, {"L.L": l_l, "pF.pF": intersect(d * FIBER, d * FIBER, d)},
              status=VERIFIED_NUMERIC),
        CertStep("nef-big.bigness", "nef with L^2 > 0 implies big", CITED,
                 {"family": "figure-1"}, citation=CITATIONS["bigness-criterion"]),
    ]
    cases = ["G = Y", "G != Y, G meets Y", "G != Y, G misses Y"]
    return CertStep("nef-big", "L is nef (every irreducible curve falls in one case) and big",
                    VERIFIED_SYMBOLIC, {"class_L": str(L), "cases": cases}, children=children)


# -- symbolic checks on the model -------------------------------------------

def _bundle_steps(m: GrauertModel, L: LineBundleCochain) -> list[CertStep]:
    F, Yb = bundle_pullback_F(m), bundle_divisor_Y(m)
    steps = []
    for key, b in (("pullback-F", F), ("divisor-Y", Yb), ("L", L)):
        bad = [t for t in m.nerve.triples if not bundle_cocycle_residual(b, t).is_zero()]
        steps.append(_step(f"bundle-cocycle.{key}",
                           f"cocycle residual of {b.name or key} vanishes on every triple",
                           not bad, {"triples": len(m.nerve.triples),
                                     "failing_triples": [list(t) for t in bad]}))
    tensor = bundle_combine("tensor", F, Yb)
    bad = [list(p) for p in m.nerve.pairs if tensor[p] != L[p]]
    steps.append(_step("bundle-cocycle.tensor", "L = p*F (x) [Y] transition by transition",
                       not bad, {"pairs": len(m.nerve.pairs), "mismatched_pairs": bad}))
    bad = [list(p) for p in m.nerve.pairs if not L.compatibility_defect(*p).is_zero()]
    steps.append(_step("bundle-cocycle.reversal", "g_kj (in chart j) * g_jk = 1 for L",
                       not bad, {"failing_pairs": bad}))
    nonlinear = [list(p) for p in m.nerve.pairs
                 if any(not c.is_zero() for c in L[p].coeffs[2:])]
    steps.append(_step("bundle-cocycle.L-linear",
                       f"L transitions are exactly linear in theta_j up to order {m.order}",
                       not nonlinear, {"order": m.order, "nonlinear_pairs": nonlinear}))
    return steps


def _normal_bundle_steps(m: GrauertModel) -> list[CertStep]:
    F, Yb = bundle_pullback_F(m), bundle_divisor_Y(m)
    lin_bad, trip_bad = [], []
    for j, k in m.nerve.pairs:
        tt = theta_transition(m, j, k)
        if tt.coeffs[1] != 1 / m.a(j, k):
            lin_bad.append([j, k])
        back = compose(invert_series(tt, chart=j), tt)
        if back != m.variable(k):
            trip_bad.append([j, k])
    frames = [list(p) for p in m.nerve.pairs if conormal_factor(m, *p) != frame_factor(m, *p)]
    n_y = restrict_to_Y(Yb).constants
    f_dual = restrict_to_Y(bundle_combine("dual", F)).constants
    iso_bad = [list(p) for p in m.nerve.pairs if n_y[p] != f_dual[p]]
    d = m.deg_f
    return [
        _step("normal-bundle.theta-linear", "d theta_j / d theta_k = 1/a_jk on Y",
              not lin_bad, {"failing_pairs": lin_bad,
                            "example": f"{theta_transition(m, 1, 2).coeffs[1]}"}),
        _step("normal-bundle.inverse", f"theta_k(theta_j) inverts theta_j(theta_k) to order {m.order}",
              not trip_bad, {"failing_pairs": trip_bad}),
        _step("normal-bundle.frames",
              "d theta_j and the frames m_j transform by the same factor a_jk, so the "
              "relabelling d/d theta_j -> n_j is a global isomorphism",
              not frames, {"failing_pairs": frames}),
        _step("normal-bundle.iso", "N_{Y/X} = [Y]|_Y has the transitions of (p|_Y)*F^-1",
              not iso_bad, {"failing_pairs": iso_bad}),
        _step("normal-bundle.degree", f"deg N_{{Y/X}} = Y.Y = -deg F = {-d}",
              intersect(Y, Y, d) == -d, {"Y.Y": intersect(Y, Y, d)}, status=VERIFIED_NUMERIC),
    ]


def _obstruction_steps(m: GrauertModel, L: LineBundleCochain):
    flat = restrict_to_Y(L)
    bad_t = [list(p) for p, t in sorted(flat.constants.items()) if t != 1]
    restriction = _step("restriction", "L|_Y has all transition constants t_jk = 1, so it is "
                        "unitary flat and topologically trivial", flat.trivial,
                        {"nontrivial_pairs": bad_t})
    try:
        u1 = extract_u1(L)
    except CochainError as exc:
        return [restriction, _failed("obstruction.u1", "extract u1 from L", exc)], None
    off = [list(p) for p in m.nerve.pairs if u1[p] != -m.xi(*p)]
    entries = {f"{j},{k}": str(u1[(j, k)]) for j, k in m.nerve.pairs}
    residuals = {t: cocycle_residual(u1, t) for t in m.nerve.triples}
    bad_c = [list(t) for t, r in residuals.items() if not r.is_zero()]
    anti = [list(p) for p, r in u1.antisymmetry_defects().items() if not r.is_zero()]
    steps = [
        restriction,
        _step("obstruction.u1", "coefficient of theta_j in e_k/e_j is -xi_jk for every pair",
              not off, {"entries": entries, "mismatched_pairs": off}),
        _step("obstruction.cocycle", "c_jk + a_jk c_kl - c_jl = 0 on every triple",
              not bad_c, {"triples": len(residuals), "failing_triples": bad_c}),
        _step("obstruction.antisymmetry", "c_kj a_jk + c_jk = 0 for every pair",
              not anti, {"failing_pairs": anti}),
    ]
    return steps, u1


def _reduction_steps(u1: ConormalCochain | None) -> list[CertStep]:
    stmt = "delta(phi) = u1 is exactly phi_k a_jk - phi_j = -xi_jk, i.e. delta{g_j m_j} = {-xi_jk m_j}"
    if u1 is None:
        return [CertStep("reduction", stmt, FAILED, {"error": "no obstruction cochain"})]
    try:
        rep = coboundary_reduction(u1)
    except CochainError as exc:
        return [_failed("reduction", stmt, exc)]
    steps = [_step("reduction", stmt, rep.verified and not rep.degenerate, rep.as_payload())]
    steps.append(CertStep("hypothesis", "[xi] != 0 in H^1(R, O_R(F))", ASSUMED,
                          {"role": "input class of the affine bundle; never decided here"}))
    return steps


def _numeric_step(m: GrauertModel, config: OracleConfig, tol_exact: float) -> CertStep:
    stmt = "sampled closed forms agree with the jets, relations and cocycles"
    try:
        nm = instantiate(m, config.generators, config.samples, config.seed)
        stats = run_checks(nm, config.tolerance, tol_exact)
    except (OracleError, ExprError, JetError, CochainError) as exc:
        return _failed("numeric", stmt, exc)
    payload = {"seed": config.seed, "samples": config.samples,
               "checks": [s.as_payload() for s in stats]}
    return _step("numeric", stmt, all(s.passed for s in stats), payload, status=VERIFIED_NUMERIC)


@dataclass
class Reports:
    riemann_roch: CertStep
    bundles: list[CertStep] = field(default_factory=list)
    normal_bundle: list[CertStep] = field(default_factory=list)
    obstruction: list[CertStep] = field(default_factory=list)
    numeric: CertStep | None = None
    reduction: list[CertStep] = field(default_factory=list)
    nef_big: CertStep | None = None


def collect_reports(m: GrauertModel, L: LineBundleCochain | None = None,
                    oracle: OracleConfig | None = None, tol_exact: float = TOL_EXACT) -> Reports:
    L = bundle_L(m) if L is None else L
    oracle = oracle or OracleConfig()
    obstruction, u1 = _obstruction_steps(m, L)
    return Reports(
        riemann_roch=riemann_roch_chain(m.genus),
        bundles=_bundle_steps(m, L),
        normal_bundle=_normal_bundle_steps(m),
        obstruction=obstruction,
        numeric=_numeric_step(m, oracle, tol_exact),
        reduction=_reduction_steps(u1),
        nef_big=nef_big_certificate(m.deg_f),
    )


def _weakest(steps) -> str:
    return min((s.status for s in steps), key=STATUS_RANK.__getitem__)


def assemble_certificate(m: GrauertModel | None, reports: Reports) -> Certificate:
    steps = reports.riemann_roch.flatten()
    if not reports.riemann_roch.ok:
        return Certificate(f"verification failed at step {reports.riemann_roch.id}", FAILED, steps)
    steps += reports.bundles + reports.normal_bundle + reports.obstruction
    if reports.numeric is not None:
        steps.append(reports.numeric)
    steps += reports.reduction
    premises = ["restriction", "obstruction.cocycle", "reduction", "hypothesis"]
    premises_ok = all(s.ok for s in steps if s.id in premises)
    steps.append(CertStep(
        "not-semipositive", "L|_Y topologically trivial and u1 != 0, hence L is not semipositive",
        CITED if premises_ok else FAILED,
        {"family": "obstruction-criterion", "premises": premises},
        citation=CITATIONS["obstruction-criterion"],
    ))
    if reports.nef_big is not None:
        steps += reports.nef_big.flatten()
    status = _weakest(steps)
    if status == FAILED:
        first = next(s for s in steps if s.status == FAILED)
        return Certificate(f"verification failed at step {first.id}", FAILED, steps)
    return Certificate(VERDICT, status, steps)


def verify(n: int = 3, genus: int = 2, deg_f: int = 1, order: int = 3,
           oracle: OracleConfig | None = None, tol_exact: float = TOL_EXACT,
           corrupt: Callable[[LineBundleCochain], LineBundleCochain] | None = None) -> Certificate:
    """Run every check for the given parameters and assemble the certificate.

    ``corrupt`` may replace the L-cochain before checking (negative controls).
    """
    rr = riemann_roch_chain(genus)
    if not rr.ok:
        return assemble_certificate(None, Reports(riemann_roch=rr))
    m = build_model(n, genus, deg_f, order)
    L = bundle_L(m)
    if corrupt is not None:
        L = corrupt(L)
    return assemble_certificate(m, collect_reports(m, L, oracle, tol_exact))


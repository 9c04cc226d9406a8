"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Symbolic caches are cleared before each timed criterion so runtimes are cold.
"""
import io
import itertools
import random
import sys
import time
from contextlib import redirect_stdout
from dataclasses import dataclass

import pytest

from grauert_cert.cech import (
    coboundary, coboundary_reduction, cocycle_residual, conormal_factor, extract_u1,
    formal_phi, frame_factor, to_F_frame,
)
from grauert_cert.cli import dispatch
from grauert_cert.expr import Expr, symbol
from grauert_cert.grauert import (
    build_model, bundle_cocycle_residual, bundle_combine, bundle_divisor_Y, bundle_L,
    bundle_pullback_F, perturb_transition, theta_transition,
)
from grauert_cert.jet import Jet, coefficient, compose, invert_series
from grauert_cert.oracle import (
    TOL_EXACT, TOL_TRUNCATION, check_cocycles_numeric, check_relations, check_transitions,
    check_u1_numeric, instantiate,
)
from grauert_cert.surface import (
    ASSUMED, CITED, FIBER, VERDICT, Certificate, Y, class_L, euler_char, intersect,
    riemann_roch_chain, verify,
)

CONSTANTS = {"a(1,2)": "2", "a(2,3)": "3", "xi(1,2)": "1/2", "xi(2,3)": "-1/3"}


@dataclass
class Outcome:
    ok: bool
    detail: str


def cold() -> None:
    for fn in (symbol, theta_transition, conormal_factor, frame_factor):
        fn.cache_clear()


def run_criterion(number: int, title: str, limit: float | None, body) -> Outcome:
    cold()
    start = time.perf_counter()
    outcome = body()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    ok = outcome.ok and in_time
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = (f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {outcome.detail}; "
            f"{elapsed:.3f} s{budget}")
    print(line, flush=True)
    return Outcome(ok, line)


def ordered_triples(m):
    return list(itertools.permutations(m.nerve.charts, 3))


# -- criterion bodies -------------------------------------------------------

def c01_u1_extraction():
    m = build_model(3, 2, 1, 3)
    L = bundle_L(m)
    bad = [p for p in m.nerve.pairs if coefficient(L[p], 1) != -m.xi(*p)]
    u1 = extract_u1(L)
    bad += [p for p in m.nerve.pairs if u1[p] != -m.xi(*p)]
    return Outcome(not bad, f"{len(m.nerve.pairs)} pairs, coefficient 1 == -xi_jk, mismatches {bad}")


def c02_exact_linearity():
    m = build_model(3, 2, 1, 5)
    L = bundle_L(m)
    bad = [(p, i) for p in m.nerve.pairs for i in range(2, 6) if coefficient(L[p], i) != 0]
    return Outcome(not bad, f"N=5, coefficients 2..5 zero on {len(m.nerve.pairs)} pairs, "
                            f"nonzero {bad}")


def c03_conormal_cocycle():
    counts, bad = [], []
    for n in (3, 4, 5):
        m = build_model(n, 2, 1, 3)
        u1 = extract_u1(bundle_L(m))
        triples = ordered_triples(m)
        counts.append(len(triples))
        bad += [(n, t) for t in triples if cocycle_residual(u1, t) != 0]
    return Outcome(not bad, f"n=3,4,5: {sum(counts)} ordered triples, nonzero residuals {bad}")


def c04_reduction():
    m = build_model(3, 2, 1, 3)
    u1 = extract_u1(bundle_L(m))
    phi = formal_phi(m)
    delta = coboundary(phi)
    system_ok = all(delta[(j, k)] == phi[k] * m.a(j, k) - phi[j] for j, k in m.nerve.pairs)
    rhs_ok = all(u1[p] == -m.xi(*p) for p in m.nerve.pairs)
    f = to_F_frame(u1)
    transport_ok = all(f[p] == u1[p] for p in m.nerve.pairs) and all(
        conormal_factor(m, *p) == frame_factor(m, *p) for p in m.nerve.pairs)
    rep = coboundary_reduction(u1)
    ok = system_ok and rhs_ok and transport_ok and rep.verified and not rep.degenerate
    return Outcome(ok, f"delta(phi)=u1 is phi_k a_jk - phi_j = -xi_jk on {len(rep.system)} pairs "
                       f"(system {system_ok}, F-frame transport {transport_ok}, report {rep.verified})")


def c05_theta_linear_and_inverse():
    m3 = build_model(3, 2, 1, 3)
    lin_bad = [p for p in m3.nerve.pairs
               if coefficient(theta_transition(m3, *p), 1) != m3.a(*p).inverse()]
    m5 = build_model(3, 2, 1, 5)
    trip_bad = []
    for j, k in m5.nerve.pairs:
        tt = theta_transition(m5, j, k)
        inv = invert_series(tt, chart=j)
        if compose(inv, tt) != m5.variable(k) or compose(tt, inv) != m5.variable(j):
            trip_bad.append((j, k))
    return Outcome(not lin_bad and not trip_bad,
                   f"linear coefficient 1/a_jk (bad {lin_bad}); order-5 round trip (bad {trip_bad})")


def c06_intersection_numbers():
    L = class_L(1)
    got = {"L.Y": intersect(L, Y, 1), "L.f": intersect(L, FIBER, 1),
           "L.L": intersect(L, L, 1), "Y.Y": intersect(Y, Y, 1)}
    want = {"L.Y": 0, "L.f": 1, "L.L": 1, "Y.Y": -1}
    return Outcome(got == want, f"{got}")


def c07_riemann_roch():
    chi_ok = all(euler_char(g, 1) == 2 - g and riemann_roch_chain(g).payload["chi"] == 2 - g
                 for g in range(2, 11))
    accepted = all(riemann_roch_chain(g).ok for g in range(2, 11))
    rejected = all(not riemann_roch_chain(g).ok for g in (0, 1))
    return Outcome(chi_ok and accepted and rejected,
                   f"chi = 2-g for g=2..10 {chi_ok}; chain holds g>=2 {accepted}; "
                   f"rejected g<=1 {rejected}")


def c08_bundle_cocycles(seed: int = 0):
    rng = random.Random(seed)
    checked, bad = 0, []
    for n in (3, 4, 5):
        m = build_model(n, 2, 1, 3)
        base = {"p*F": bundle_pullback_F(m), "[Y]": bundle_divisor_Y(m), "L": bundle_L(m)}
        bundles = dict(base)
        for r in range(4):
            b = rng.choice(list(base.values()))
            for _ in range(rng.randint(1, 3)):
                other = rng.choice(list(base.values()))
                if rng.random() < 0.5:
                    other = bundle_combine("dual", other)
                b = bundle_combine("tensor", b, other)
            bundles[f"random-{r}"] = b
        for name, b in bundles.items():
            for t in ordered_triples(m):
                checked += 1
                if not bundle_cocycle_residual(b, t).is_zero():
                    bad.append((n, name, t))
    return Outcome(not bad, f"{checked} residual jets over n=3..5, nonzero {bad[:3]}")


def c09_oracle():
    m = build_model(3, 2, 1, 3)
    worst = {"exact": 0.0, "truncation": 0.0, "derivative": 0.0}
    for seed in range(20):
        nm = instantiate(m, CONSTANTS, samples=10, seed=seed)
        worst["exact"] = max(worst["exact"], check_relations(nm).max_abs,
                             check_cocycles_numeric(nm, TOL_EXACT).max_abs)
        worst["truncation"] = max(worst["truncation"], check_transitions(nm).max_abs,
                                  check_u1_numeric(nm).detail["second_difference_max"])
        worst["derivative"] = max(worst["derivative"],
                                  check_u1_numeric(nm).detail["derivative_max"])
    ok = (worst["exact"] < TOL_EXACT and worst["truncation"] < TOL_TRUNCATION
          and worst["derivative"] < TOL_TRUNCATION)
    return Outcome(ok, "20 seeds x 10 samples, max residuals " +
                   ", ".join(f"{k} {v:.2e}" for k, v in worst.items()))


def _cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = dispatch(list(argv))
    return code, buf.getvalue()


def c10_end_to_end():
    code, out = _cli("verify", "--format", "json", "--seed", "0")
    code2, out2 = _cli("verify", "--format", "json", "--seed", "0")
    md1, md2 = _cli("verify")[1], _cli("verify")[1]
    cert = Certificate.from_json(out)
    assumed = [s.id for s in cert.steps if s.status == ASSUMED]
    cites = " ".join(s.citation for s in cert.steps if s.status == CITED)
    need = ("Theorem 2.13", "Figure 1", "effective-intersection")
    ok = (code == 0 and code2 == 0 and cert.verdict == VERDICT and assumed == ["hypothesis"]
          and all(c in cites for c in need) and out == out2 and md1 == md2)
    return Outcome(ok, f"exit {code}, verdict {cert.verdict!r}, assumed {assumed}, "
                       f"citations {[c for c in need if c in cites]}, byte-identical {out == out2}")


def _perturbations(b):
    """Every single-constant change of one transition: generator shifts and coefficient shifts."""
    m = b.model
    for pair, g in b.transitions.items():
        gens = sorted({s for c in g.coeffs for s in c.free_symbols()})
        for s in gens:
            if s.kind == "A":
                yield f"{pair} {s}*2", perturb_transition(b, pair, s, scale=2)
            else:
                yield f"{pair} {s}+1", perturb_transition(b, pair, s)
        for i in (0, 1):
            coeffs = list(g.coeffs)
            coeffs[i] = coeffs[i] + Expr.one(m.n)
            trans = dict(b.transitions)
            trans[pair] = Jet(g.chart, tuple(coeffs))
            yield f"{pair} c{i}+1", type(b)(m, trans, b.name)


def c11_negative_controls():
    m = build_model(3, 2, 1, 3)
    triples = ordered_triples(m)
    undetected, total = [], 0
    for b in (bundle_pullback_F(m), bundle_divisor_Y(m), bundle_L(m)):
        for label, bad in _perturbations(b):
            total += 1
            if all(bundle_cocycle_residual(bad, t).is_zero() for t in triples):
                undetected.append((b.name, label))
    cert_misses = []
    certs = 0
    for label, _ in _perturbations(bundle_L(m)):
        certs += 1
        lab = label

        def corrupt(L, lab=lab):
            return dict(_perturbations(L))[lab]

        cert = verify(corrupt=corrupt)
        step = cert.failed_step
        if cert.ok or step is None or not step.id.startswith("bundle-cocycle") \
                or step.id not in cert.verdict:
            cert_misses.append(label)
    g1 = verify(genus=1)
    g1_ok = not g1.ok and g1.failed_step.id == "riemann-roch"
    ok = not undetected and not cert_misses and g1_ok
    return Outcome(ok, f"{total} perturbations all caught by residuals (missed {undetected}); "
                       f"{certs} corrupted certificates name a bundle-cocycle step "
                       f"(missed {cert_misses}); g=1 fails at riemann-roch {g1_ok}")


CRITERIA = [
    (1, "u1 extraction on n=3", 1.0, c01_u1_extraction),
    (2, "exact linearity of L at N=5", 1.0, c02_exact_linearity),
    (3, "conormal cocycle residual, n=3,4,5", 2.0, c03_conormal_cocycle),
    (4, "coboundary reduction", 1.0, c04_reduction),
    (5, "theta linear term and inverse round trip", 1.0, c05_theta_linear_and_inverse),
    (6, "intersection numbers at d=1", 0.1, c06_intersection_numbers),
    (7, "Riemann-Roch chain", 0.1, c07_riemann_roch),
    (8, "bundle cocycle residuals", 5.0, c08_bundle_cocycles),
    (9, "numeric oracle agreement", 10.0, c09_oracle),
    (10, "end-to-end verify", 15.0, c10_end_to_end),
    (11, "negative controls", 5.0, c11_negative_controls),
]


@pytest.mark.parametrize("number,title,limit,body", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, limit, body, capsys):
    with capsys.disabled():
        outcome = run_criterion(number, title, limit, body)
    assert outcome.ok, outcome.detail


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    passed = sum(r.ok for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    sys.exit(0 if passed == len(results) else 1)

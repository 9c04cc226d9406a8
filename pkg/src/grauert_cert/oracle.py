"""Numeric cross-checks of the symbolic expansions.

The free generators are instantiated by constants or rational functions of a
single coordinate x, sampled in the unit disk.  Derived transitions a_jk, xi_jk
are recomputed here by composing the affine gluing maps as 2x2 matrices, a
route that shares nothing with the rewrite rules in :mod:`grauert_cert.expr`.
Closed-form transition functions are then compared against the jets.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

from .cech import extract_u1
from .expr import XI, Expr, ExprError, SymbolId, evaluate, evaluate_tree, parse, parse_symbol
from .grauert import GrauertModel, LineBundleCochain, bundle_L, theta_transition
from .jet import Jet, invert_series

__all__ = [
    "OracleError", "NumericModel", "ResidualStats", "OracleConfig",
    "TOL_TRUNCATION", "TOL_EXACT", "TOL_RELATIONS",
    "default_generators", "instantiate", "check_transitions", "check_u1_numeric",
    "check_cocycles_numeric", "check_relations", "run_checks", "load_config",
]

TOL_TRUNCATION = 1e-6
TOL_EXACT = 1e-10
TOL_RELATIONS = 1e-12
THETAS = (1e-2, 1e-3)
STEP = 1e-4


class OracleError(ValueError):
    pass


@dataclass
class ResidualStats:
    name: str
    max_abs: float
    mean: float
    count: int
    tol: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_abs < self.tol

    def as_payload(self) -> dict:
        return {
            "name": self.name, "max_abs": self.max_abs, "mean": self.mean,
            "count": self.count, "tol": self.tol, "passed": self.passed, **self.detail,
        }


def _stats(name: str, residuals: list[float], tol: float, **detail) -> ResidualStats:
    if not residuals:
        return ResidualStats(name, 0.0, 0.0, 0, tol, detail)
    return ResidualStats(name, max(residuals), math.fsum(residuals) / len(residuals),
                         len(residuals), tol, detail)


def default_generators(n: int) -> dict[str, str]:
    """``A_i = i+1``, ``XI_i = (-1)^(i+1)/(i+1)``; for n = 3: 2, 3, 1/2, -1/3."""
    gens = {}
    for i in range(1, n):
        gens[f"a({i},{i + 1})"] = str(i + 1)
        gens[f"xi({i},{i + 1})"] = ("" if i % 2 else "-") + f"1/{i + 1}"
    return gens


def _tree_symbols(tree):
    if tree[0] == "sym":
        yield tree[1]
    elif tree[0] != "num":
        for sub in tree[1:]:
            if isinstance(sub, tuple):
                yield from _tree_symbols(sub)


def _value_fn(value) -> Callable[[complex], complex]:
    if isinstance(value, str):
        tree = parse(value)
        bad = [str(t) for t in _tree_symbols(tree) if t.kind != "X"]
        if bad:
            raise OracleError(f"generator value {value!r} may only involve x, found {bad}")
        return lambda x: evaluate_tree(tree, x)
    if isinstance(value, Expr):
        if any(s.kind != "X" for s in value.free_symbols()):
            raise OracleError(f"generator value {value} may only involve x")
        return lambda x: evaluate(value, {}, x)
    if isinstance(value, (int, float, complex, Fraction)):
        c = complex(value)
        return lambda x: c
    raise OracleError(f"unsupported generator value {value!r}")


def _affine_tables(n: int, gen: Mapping[SymbolId, complex]):
    """All a_jk, xi_jk from 2x2 products of ``[[a, xi], [0, 1]]`` (eta_k -> eta_j)."""
    step = {}
    for i in range(1, n):
        step[i] = ((gen[SymbolId("A", i, i + 1)], gen[SymbolId(XI, i, i + 1)]), (0j, 1 + 0j))
    a, xi = {}, {}
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            mat = ((1 + 0j, 0j), (0j, 1 + 0j))
            for i in range(j, k):
                mat = _matmul(mat, step[i])
            a[(j, k)], xi[(j, k)] = mat[0][0], mat[0][1]
            inv = _matinv(mat)
            a[(k, j)], xi[(k, j)] = inv[0][0], inv[0][1]
    return a, xi


def _matmul(p, q):
    return tuple(tuple(sum(p[r][t] * q[t][c] for t in range(2)) for c in range(2)) for r in range(2))


def _matinv(p):
    (a, b), (c, d) = p
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


@dataclass
class NumericModel:
    model: GrauertModel
    assignment: dict[SymbolId, object]
    seed: int
    samples: list[complex]
    env: list[dict[SymbolId, complex]]
    a: list[dict[tuple[int, int], complex]]
    xi: list[dict[tuple[int, int], complex]]
    resampled: int = 0


def instantiate(m: GrauertModel, gens: Mapping | None = None, samples: int = 10, seed: int = 0,
                min_abs: float = 1e-6, max_retries: int = 100) -> NumericModel:
    """Sample ``samples`` base points and evaluate every transition there."""
    if samples < 1:
        raise OracleError("need at least one sample")
    gens = default_generators(m.n) if gens is None else gens
    assignment = {}
    for key, value in gens.items():
        sym = key if isinstance(key, SymbolId) else parse_symbol(key)
        assignment[sym] = value
    free = set(m.free_generators)
    if set(assignment) != free:
        missing = sorted(str(s) for s in free - set(assignment))
        extra = sorted(str(s) for s in set(assignment) - free)
        raise OracleError(f"assignment must cover exactly the free generators; "
                          f"missing {missing}, unexpected {extra}")
    fns = {s: _value_fn(v) for s, v in assignment.items()}

    rng = random.Random(seed)
    xs, envs, a_tab, xi_tab = [], [], [], []
    resampled = 0
    for _ in range(samples):
        for attempt in range(max_retries + 1):
            r, phase = math.sqrt(rng.random()), 2 * math.pi * rng.random()
            x = complex(r * math.cos(phase), r * math.sin(phase))
            try:
                env = {s: f(x) for s, f in fns.items()}
                if any(abs(env[s]) < min_abs for s in env if s.kind == "A"):
                    raise ZeroDivisionError
                a, xi = _affine_tables(m.n, env)
            except (ZeroDivisionError, ExprError):
                resampled += 1
                continue
            if all(abs(v) >= min_abs for v in a.values()):
                break
            resampled += 1
        else:
            raise OracleError(f"resampling exhausted after {max_retries} retries")
        xs.append(x)
        envs.append(env)
        a_tab.append(a)
        xi_tab.append(xi)
    return NumericModel(m, assignment, seed, xs, envs, a_tab, xi_tab, resampled)


def check_transitions(nm: NumericModel, tol: float = TOL_TRUNCATION,
                      jets: Mapping[tuple[int, int], Jet] | None = None,
                      thetas=THETAS) -> ResidualStats:
    """Jet of ``theta_j(theta_k)`` and its inverse against the closed form.

    Each theta is shrunk by ``max(1, |1/a|, |xi/a|)`` so that ``theta_j`` and the
    expansion parameter ``xi theta / a`` stay below the nominal theta; both
    truncation errors are then at most about ``theta^(N+1)`` for every pair.
    """
    m = nm.model
    series = {p: theta_transition(m, *p) for p in m.nerve.pairs}
    if jets:
        series.update(jets)
    inverses = {p: invert_series(s, chart=p[0]) for p, s in series.items()}
    res = []
    for s, x in enumerate(nm.samples):
        env = nm.env[s]
        for (j, k), jet in series.items():
            a, xi = nm.a[s][(j, k)], nm.xi[s][(j, k)]
            scale = max(1.0, abs(1 / a), abs(xi / a))
            for t in thetas:
                t = t / scale
                closed = t / (a + xi * t)
                res.append(abs(jet.evaluate(env, t, x) - closed))
                res.append(abs(inverses[(j, k)].evaluate(env, closed, x) - t))
    return _stats("theta transitions", res, tol)


def _theta_k(a: complex, xi: complex, t: complex) -> complex:
    return a * t / (1 - xi * t)


def check_u1_numeric(nm: NumericModel, tol: float = TOL_TRUNCATION, h: float = STEP,
                     bundle: LineBundleCochain | None = None) -> ResidualStats:
    """Central difference of ``e_k/e_j`` at theta_j = 0 against the jet coefficient."""
    m = nm.model
    u1 = extract_u1(bundle if bundle is not None else bundle_L(m))
    res, second = [], []
    for s, x in enumerate(nm.samples):
        env = nm.env[s]
        for (j, k) in m.nerve.pairs:
            a, xi = nm.a[s][(j, k)], nm.xi[s][(j, k)]

            def G(t):
                return a / (a + xi * _theta_k(a, xi, t))

            deriv = (G(h) - G(-h)) / (2 * h)
            res.append(abs(deriv - evaluate(u1[(j, k)], env, x)))
            second.append(abs(G(h) - 2 * G(0) + G(-h)))
    stats = _stats("u1 divided differences", res + second, tol,
                   derivative_max=max(res), second_difference_max=max(second), step=h)
    return stats


def _closed_transitions(a, xi, t_k):
    return {
        "p*F": a,
        "[Y]": 1 / (a + xi * t_k),
        "L": a / (a + xi * t_k),
    }


def check_cocycles_numeric(nm: NumericModel, tol: float = TOL_EXACT,
                           bundle: LineBundleCochain | None = None,
                           thetas=THETAS) -> ResidualStats:
    """Closed-form triple products against 1, and the conormal cocycle against 0."""
    m = nm.model
    u1 = extract_u1(bundle if bundle is not None else bundle_L(m))
    bundle_res, conormal_res = [], []
    for s, x in enumerate(nm.samples):
        env, a, xi = nm.env[s], nm.a[s], nm.xi[s]
        c = {p: evaluate(e, env, x) for p, e in u1.entries.items()}
        for j, k, l in m.nerve.triples:
            for t_j in thetas:
                eta_j = 1 / t_j
                eta_k = (eta_j - xi[(j, k)]) / a[(j, k)]
                eta_l = (eta_j - xi[(j, l)]) / a[(j, l)]
                t = {j: t_j, k: 1 / eta_k, l: 1 / eta_l}
                # e_k/e_j * e_l/e_k * e_j/e_l, each written in its second chart's theta
                g_jk = _closed_transitions(a[(j, k)], xi[(j, k)], t[k])
                g_kl = _closed_transitions(a[(k, l)], xi[(k, l)], t[l])
                g_lj = _closed_transitions(a[(l, j)], xi[(l, j)], t[j])
                for name in g_jk:
                    bundle_res.append(abs(g_jk[name] * g_kl[name] * g_lj[name] - 1))
            conormal_res.append(abs(c[(j, k)] + a[(j, k)] * c[(k, l)] - c[(j, l)]))
    return _stats("cocycles", bundle_res + conormal_res, tol,
                  bundle_max=max(bundle_res), conormal_max=max(conormal_res))


def check_relations(nm: NumericModel, tol: float = TOL_RELATIONS) -> ResidualStats:
    """Matrix-composed a_jk, xi_jk against evaluation of the rewritten symbols."""
    m = nm.model
    res = []
    for s, x in enumerate(nm.samples):
        env = nm.env[s]
        for j, k in m.nerve.pairs:
            for sym_val, num_val in ((m.a(j, k), nm.a[s][(j, k)]), (m.xi(j, k), nm.xi[s][(j, k)])):
                res.append(abs(evaluate(sym_val, env, x) - num_val) / max(1.0, abs(num_val)))
    return _stats("relations", res, tol)


def run_checks(nm: NumericModel, tol_truncation: float = TOL_TRUNCATION,
               tol_exact: float = TOL_EXACT) -> list[ResidualStats]:
    return [
        check_relations(nm, min(tol_exact, TOL_RELATIONS)),
        check_transitions(nm, tol_truncation),
        check_u1_numeric(nm, tol_truncation),
        check_cocycles_numeric(nm, tol_exact),
    ]


@dataclass
class OracleConfig:
    generators: dict[str, str] | None = None
    samples: int = 10
    seed: int = 0
    tolerance: float = TOL_TRUNCATION

    @classmethod
    def from_dict(cls, data: Mapping) -> "OracleConfig":
        unknown = set(data) - {"generators", "samples", "seed", "tolerance"}
        if unknown:
            raise OracleError(f"unknown oracle config keys: {sorted(unknown)}")
        gens = data.get("generators")
        if gens is not None:
            gens = {str(k): str(v) for k, v in gens.items()}
        return cls(gens, int(data.get("samples", 10)), int(data.get("seed", 0)),
                   float(data.get("tolerance", TOL_TRUNCATION)))


def load_config(path) -> OracleConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise OracleError(f"invalid oracle config {path}: {exc}") from exc
    return OracleConfig.from_dict(data)

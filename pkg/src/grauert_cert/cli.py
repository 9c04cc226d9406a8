"""Command-line front end.

    grauert-cert verify     [--charts N --genus G --degF D --order N --format md|json --out PATH]
    grauert-cert expand     [--pair J,K --order N --charts N]
    grauert-cert intersect  [--degF D --class A,B --class2 A,B]
    grauert-cert rr         [--genus G --deg D]
    grauert-cert oracle     [--oracle-config PATH --seed S --tol T]

Exit codes: 0 all checks hold (cited rules and hypotheses allowed), 1 a check
failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .cech import extract_u1
from .expr import ExprError
from .grauert import (
    ModelError, build_model, bundle_divisor_Y, bundle_L, bundle_pullback_F, theta_transition,
)
from .jet import invert_series
from .oracle import OracleConfig, OracleError, TOL_EXACT, instantiate, load_config, run_checks
from .surface import Certificate, NSClass, class_L, euler_char, intersect, riemann_roch_chain, verify

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
FORMATS = ("md", "json")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    charts: int = 3
    genus: int = 2
    degF: int = 1
    order: int = 3
    format: str = "md"
    out: str | None = None
    oracle_config: str | None = None
    seed: int | None = None
    tol: float | None = None
    pair: tuple[int, int] = (1, 2)
    cls: tuple[int, int] | None = None
    cls2: tuple[int, int] | None = None
    deg: int = 1

    def validate(self) -> None:
        if self.charts < 3:
            raise UsageError("--charts must be at least 3")
        if self.order < 1:
            raise UsageError("--order must be at least 1")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {FORMATS}")
        if self.tol is not None and self.tol <= 0:
            raise UsageError("--tol must be positive")
        j, k = self.pair
        if j == k or not (1 <= j <= self.charts and 1 <= k <= self.charts):
            raise UsageError(f"--pair must name two distinct charts in 1..{self.charts}")
        if self.subcommand == "verify" and self.degF < 1:
            raise UsageError("--degF must be at least 1 for verify")
        if self.subcommand in ("rr", "verify") and self.genus < 0:
            raise UsageError("--genus must be non-negative")


def _int_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated integers, got {text!r}")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--charts", type=int, default=3)
    common.add_argument("--genus", type=int, default=2)
    common.add_argument("--degF", type=int, default=1)
    common.add_argument("--order", type=int, default=3)
    common.add_argument("--format", default="md", choices=FORMATS)
    common.add_argument("--out")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--oracle-config", dest="oracle_config")
    common.add_argument("--pair", type=_int_pair, default=(1, 2))
    common.add_argument("--class", dest="cls", type=_int_pair)
    common.add_argument("--class2", dest="cls2", type=_int_pair)
    common.add_argument("--deg", type=int, default=1)

    parser = argparse.ArgumentParser(prog="grauert-cert", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("verify", parents=[common], help="run every check and emit the certificate")
    sub.add_parser("expand", parents=[common], help="print the transition jets for one pair")
    sub.add_parser("intersect", parents=[common], help="intersection number of two classes")
    sub.add_parser("rr", parents=[common], help="Riemann-Roch count and the H^1 != 0 chain")
    sub.add_parser("oracle", parents=[common], help="numeric cross-check of the expansions")
    return parser


def render_report(cert: Certificate, fmt: str) -> str:
    if fmt == "json":
        return cert.to_json()
    if fmt == "md":
        return cert.to_markdown()
    raise UsageError(f"unknown format {fmt!r}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _oracle_config(cfg: RunConfig) -> OracleConfig:
    oc = load_config(cfg.oracle_config) if cfg.oracle_config else OracleConfig()
    if cfg.seed is not None:
        oc.seed = cfg.seed
    if cfg.tol is not None:
        oc.tolerance = cfg.tol
    return oc


def cmd_verify(cfg: RunConfig) -> int:
    cert = verify(cfg.charts, cfg.genus, cfg.degF, cfg.order, _oracle_config(cfg), TOL_EXACT)
    _emit(render_report(cert, cfg.format), cfg.out)
    return EXIT_OK if cert.ok else EXIT_FAILED


def cmd_expand(cfg: RunConfig) -> int:
    m = build_model(cfg.charts, max(cfg.genus, 2), cfg.degF, cfg.order)
    j, k = cfg.pair
    tt = theta_transition(m, j, k)
    rows = [
        (f"theta_{j} in theta_{k}", tt),
        (f"theta_{k} in theta_{j}", invert_series(tt, chart=j)),
        (f"p*F transition m_{k}/m_{j}", bundle_pullback_F(m)[(j, k)]),
        (f"[Y] transition v_{k}/v_{j}", bundle_divisor_Y(m)[(j, k)]),
        (f"L transition e_{k}/e_{j}", bundle_L(m)[(j, k)]),
    ]
    if cfg.format == "json":
        data = {name: {"chart": jet.chart, "order": jet.order,
                       "coeffs": [str(c) for c in jet.coeffs]} for name, jet in rows}
        data["u1"] = str(extract_u1(bundle_L(m))[(j, k)])
        text = json.dumps(data, indent=2) + "\n"
    else:
        text = "".join(f"{name}:\n  {jet}\n" for name, jet in rows)
        text += f"u1 entry ({j},{k}): {extract_u1(bundle_L(m))[(j, k)]} d_theta_{j}\n"
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_intersect(cfg: RunConfig) -> int:
    c1 = NSClass(*cfg.cls) if cfg.cls else class_L(cfg.degF)
    c2 = NSClass(*cfg.cls2) if cfg.cls2 else c1
    _emit(f"{intersect(c1, c2, cfg.degF)}\n", cfg.out)
    return EXIT_OK


def cmd_rr(cfg: RunConfig) -> int:
    chi = euler_char(cfg.genus, cfg.deg)
    step = riemann_roch_chain(cfg.genus)
    lines = [f"χ = {chi}  (deg - g + 1 = {cfg.deg} - {cfg.genus} + 1)"]
    lines.append(f"F = [p] (deg 1): h0 - h1 = 2 - g = {2 - cfg.genus}")
    for s in step.flatten():
        lines.append(f"[{s.status}] {s.id}: {s.statement}")
    if step.ok:
        lines.append(f"h1 >= h0 + {cfg.genus - 2} >= 1, so H^1(R, O_R(F)) != 0")
    else:
        lines.append(step.payload.get("error", "chain failed"))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if step.ok else EXIT_FAILED


def cmd_oracle(cfg: RunConfig) -> int:
    oc = _oracle_config(cfg)
    m = build_model(cfg.charts, max(cfg.genus, 2), cfg.degF, cfg.order)
    stats = run_checks(instantiate(m, oc.generators, oc.samples, oc.seed), oc.tolerance, TOL_EXACT)
    if cfg.format == "json":
        text = json.dumps([s.as_payload() for s in stats], indent=2) + "\n"
    else:
        text = "".join(f"{'PASS' if s.passed else 'FAIL'} {s.name}: max {s.max_abs:.3e} "
                       f"(tol {s.tol:.0e}, {s.count} residuals)\n" for s in stats)
    _emit(text, cfg.out)
    return EXIT_OK if all(s.passed for s in stats) else EXIT_FAILED


COMMANDS = {"verify": cmd_verify, "expand": cmd_expand, "intersect": cmd_intersect,
            "rr": cmd_rr, "oracle": cmd_oracle}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = RunConfig(**vars(ns))
    try:
        cfg.validate()
        return COMMANDS[cfg.subcommand](cfg)
    except (UsageError, ModelError, OracleError, ExprError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

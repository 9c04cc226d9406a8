#!/usr/bin/env python3
"""Run the full verification and write both report formats.

    python scripts/run_verify.py --outdir reports --charts 4
"""
import argparse
import sys
from pathlib import Path

from grauert_cert.oracle import OracleConfig
from grauert_cert.surface import verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--outdir", default="reports")
    ap.add_argument("--charts", type=int, default=3)
    ap.add_argument("--genus", type=int, default=2)
    ap.add_argument("--degF", type=int, default=1)
    ap.add_argument("--order", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cert = verify(args.charts, args.genus, args.degF, args.order, OracleConfig(seed=args.seed))
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "certificate.json").write_text(cert.to_json())
    (out / "certificate.md").write_text(cert.to_markdown())
    print(f"{cert.verdict} [{cert.status}] -> {out}/certificate.{{json,md}}")
    return 0 if cert.ok else 1


if __name__ == "__main__":
    sys.exit(main())

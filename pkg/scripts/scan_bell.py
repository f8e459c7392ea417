#!/usr/bin/env python3
"""Closed-form bound and PPT membership over a Bell-mixture simplex grid, as CSV."""

import argparse

from pptbound.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="bell_scan.csv")
    ap.add_argument("--precision", type=int, default=9)
    args = ap.parse_args()
    return cli_main(["experiment", "bell_scan", "--out", args.out,
                     "--precision", str(args.precision)])


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Optimizer-versus-closed-form scan over the isotropic family, as CSV."""

import argparse

from pptbound.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="isotropic_scan.csv")
    ap.add_argument("--precision", type=int, default=9)
    args = ap.parse_args()
    return cli_main(["experiment", "isotropic_scan", "--out", args.out,
                     "--precision", str(args.precision)])


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Multiplier-norm lower bounds against the Koebe target over an alpha grid.

    python scripts/shimorin_scan.py koebe E2 P3 --alphas 0.25,0.5,1,2,4
"""

from __future__ import annotations

import argparse
import sys

from imspec.bergman import koebe_target, multiplier_lower_bound
from imspec.catalog import lookup
from imspec.config import DEFAULT


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("entries", nargs="*", default=["koebe", "E2", "P3"])
    ap.add_argument("--alphas", default="0.5,1,2")
    args = ap.parse_args()

    alphas = [float(a) for a in args.alphas.split(",")]
    print(f"{'entry':>8} {'alpha':>6} {'lower bound':>14} {'target':>12} "
          f"{'ratio':>9}  method")
    for name in args.entries:
        entry = lookup(name)
        if not entry.is_rational:
            print(f"{name:>8}  (skipped: not rational)")
            continue
        S = entry.schwarzian_phi
        for alpha in alphas:
            bound = multiplier_lower_bound(S, alpha, DEFAULT)
            target = koebe_target(alpha)
            print(f"{name:>8} {alpha:6g} {bound.value:14.6f} {target:12.6f} "
                  f"{bound.value / target:9.6f}  {bound.method}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

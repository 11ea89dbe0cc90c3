#!/usr/bin/env python3
"""Sweep tau for a catalog entry: closed form vs numeric estimate.

Writes a CSV with one row per tau; plot it with anything that reads CSV.

    python scripts/spectrum_sweep.py koebe --tau-min -3 --tau-max 3 --steps 25
"""

from __future__ import annotations

import argparse
import sys

from imspec.catalog import lookup
from imspec.classify import classify, closed_form_spectrum
from imspec.config import DEFAULT
from imspec.errors import Unsupported
from imspec.ims import estimate_spectrum
from imspec.serialize import fmt_float


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("entry", nargs="?", default="koebe")
    ap.add_argument("--tau-min", type=float, default=-3.0)
    ap.add_argument("--tau-max", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=25)
    ap.add_argument("--k-max", type=int, default=14)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    entry = lookup(args.entry)
    label = classify(entry.rational) if entry.is_rational else None

    rows = ["tau,closed_form,numeric,slope,log_regime"]
    print(rows[0])
    for i in range(args.steps + 1):
        tau = args.tau_min + (args.tau_max - args.tau_min) * i / args.steps
        if abs(tau) < 1e-12:
            tau = 0.0
        try:
            closed = "" if label is None else fmt_float(closed_form_spectrum(label, tau))
        except Unsupported:
            closed = ""
        est = estimate_spectrum(entry.derivative, tau, DEFAULT, k_max=args.k_max)
        rows.append(f"{fmt_float(tau)},{closed},{fmt_float(est.spectrum())},"
                    f"{fmt_float(est.slope)},{int(est.log_regime)}")
        print(rows[-1])

    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

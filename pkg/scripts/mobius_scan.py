#!/usr/bin/env python3
"""Scan the degree-2 family T(w, z) = z(2z - w)/(2 - wz) over real w.

For every grid point the converged eigenvalue sequence is computed and
summarised by |lambda_2| (= w/2, the interior multiplier modulus), the
fitted stretch exponent beta of |lambda_n| ~ exp(-c n^beta), and the
resulting order estimate 1 + 1/beta of the spectral determinant.  Away from
w = 0 the spectrum is infinite with purely exponential decay, so beta stays
near 1 and the order near 2.

Usage: python scripts/mobius_scan.py [count] [out.csv]
"""

import sys

from ruelle.cli import main

count = int(sys.argv[1]) if len(sys.argv) > 1 else 11
out = sys.argv[2] if len(sys.argv) > 2 else "mobius_scan.csv"

code = main(
    [
        "scan",
        "--family",
        "mobius",
        "--grid",
        f"0:1:{count}",
        "--annulus",
        "0.8,1.25",
        "--out",
        out,
    ]
)
print(open(out).read())
print(f"wrote {out}")
sys.exit(code)

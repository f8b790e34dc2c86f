#!/usr/bin/env python3
"""Render the filled Julia set of T(w, z) = z(2z - w)/(2 - wz).

The default parameter w = 0.5 + 0.26i sits off the real segment [0, 1]:
the map no longer preserves the unit circle and the common boundary of the
two attracting basins (0 and infinity) becomes a quasi-circle.

Usage: python scripts/render_julia.py [re,im] [size] [out.pgm]
"""

import sys

from ruelle.cli import main

w = sys.argv[1] if len(sys.argv) > 1 else "0.5,0.26"
size = sys.argv[2] if len(sys.argv) > 2 else "512x512"
out = sys.argv[3] if len(sys.argv) > 3 else "julia.pgm"

sys.exit(main(["julia", "--w", w, "--size", size, "--mode", "basin", "--out", out]))

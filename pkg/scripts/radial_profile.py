#!/usr/bin/env python3
"""Solve the radial conformal-factor equation and dump the profile as CSV.

Usage: radial_profile.py out.csv [c] [m] [N]
"""

import sys

from foldedhk.cli import main

if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__.strip())
    args = ["higgs-radial", "--csv", sys.argv[1]]
    if len(sys.argv) > 2:
        args += ["--c", sys.argv[2]]
    if len(sys.argv) > 3:
        args += ["--m", sys.argv[3]]
    if len(sys.argv) > 4:
        args += ["--n-grid", sys.argv[4]]
    sys.exit(main(args))

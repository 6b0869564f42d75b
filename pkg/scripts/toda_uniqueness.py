#!/usr/bin/env python3
"""Perturb the reduced circle-invariant equation and watch Newton collapse
the solution back to the constant; dumps the converged grid as CSV.

Usage: toda_uniqueness.py out.csv [amplitude]
"""

import sys

from foldedhk.cli import main

if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__.strip())
    args = ["toda-uniqueness", "--csv", sys.argv[1]]
    if len(sys.argv) > 2:
        args += ["--amp", sys.argv[2]]
    sys.exit(main(args))

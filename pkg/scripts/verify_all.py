#!/usr/bin/env python3
"""Run every verification suite and write the aggregate report.

Usage: verify_all.py [report.json]
"""

import sys

from foldedhk.cli import main

if __name__ == "__main__":
    args = ["all"]
    if len(sys.argv) > 1:
        args += ["--out", sys.argv[1]]
    sys.exit(main(args))

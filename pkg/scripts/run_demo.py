#!/usr/bin/env python3
"""Run the built-in corpus end to end and print the pass/fail matrix.

Equivalent to `dvkit demo`; exits 0 only when every row passes, so this
doubles as a CI gate.
"""

import sys

from dvkit.cli import main

if __name__ == "__main__":
    sys.exit(main(["demo", *sys.argv[1:]]))

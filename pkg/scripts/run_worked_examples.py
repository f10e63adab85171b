#!/usr/bin/env python3
"""Run the two shipped worked examples end to end and diff against the
expected records in data/.  Exit code 0 means every value matched."""

import sys

from ainfty.cli import main

if __name__ == "__main__":
    code = main(["reproduce", "example-2.6"])
    code |= main(["reproduce", "example-3.3", "--seeds", "20"])
    sys.exit(code)

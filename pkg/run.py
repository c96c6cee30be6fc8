#!/usr/bin/env python3
"""
regdim - Run Script

Batch front end: python run.py {formula,estimate,sweep} ...
"""

import sys

from regdim.cli import main

if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
SlidingK experiment runner

Example:
    python run_experiment.py --synth 15:50000:2:8 --window 10000 --k 15 --order shuffled
"""

import sys
from app.cli import main

if __name__ == "__main__":
    sys.exit(main())

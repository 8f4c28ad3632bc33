"""Application entry point.

Run the whole experiment pipeline with:
    python run.py all

or a single stage with:
    python run.py hull | sample | gen-data | train | evaluate | sweep

Artifacts are written to results/ unless --out or output.dir says otherwise.
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())

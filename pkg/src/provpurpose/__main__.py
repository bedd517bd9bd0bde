"""Entry point for ``python -m provpurpose``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())

"""Allow `python -m contagion_plots` as an alias for the `plot` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())

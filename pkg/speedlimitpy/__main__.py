# speedlimitpy/__main__.py
"""Allow ``python -m speedlimitpy``."""

import sys

from .cli import main

sys.exit(main())

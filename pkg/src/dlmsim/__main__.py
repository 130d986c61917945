"""Allow ``python3 -m dlmsim``."""

import sys

from .cli import main

sys.exit(main())

"""Module entry point so python -m crawlcount works."""

import sys

from .cli import main

sys.exit(main())

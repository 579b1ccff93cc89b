"""Allow running as `python -m sparsetrain`."""

import sys

from sparsetrain.cli import main

sys.exit(main())

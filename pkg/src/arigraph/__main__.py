import sys

from arigraph.cli import main

sys.exit(main())

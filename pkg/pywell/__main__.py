import sys

from pywell.cli import main

sys.exit(main())

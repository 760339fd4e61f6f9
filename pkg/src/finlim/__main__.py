import sys

from finlim.cli import main

sys.exit(main())

import sys

from delinf.cli import main

sys.exit(main())

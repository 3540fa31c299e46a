import sys

from ordforge.cli import main

sys.exit(main())

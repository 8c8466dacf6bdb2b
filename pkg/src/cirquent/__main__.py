import sys

from cirquent.cli import main

sys.exit(main())

import sys

from boettcher.cli import main

sys.exit(main())

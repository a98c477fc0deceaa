import sys

from wrcomm.cli import main

sys.exit(main())

import sys

from srland.cli.main import main

sys.exit(main())

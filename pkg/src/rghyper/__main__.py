import sys

from rghyper.cli import main

sys.exit(main())

import sys

from cubench.cli import main

sys.exit(main())

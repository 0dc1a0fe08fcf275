import sys

from kthit.cli import main

sys.exit(main())

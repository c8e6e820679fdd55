import sys

from retraction_kit.cli import main

sys.exit(main())

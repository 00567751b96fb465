import sys

from tsgraphssl.cli import main

sys.exit(main())

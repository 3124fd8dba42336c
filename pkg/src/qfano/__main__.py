import sys

from qfano.cli import main

sys.exit(main())

import sys

from signedbit.cli import main

sys.exit(main())

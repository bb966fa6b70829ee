import sys

from tcp_aga.cli import main

sys.exit(main())

"""Compatibility shim for the command-line entrypoint.

Run with:
  python cli.py classify --a 1/2 --b 1/2 --c 1
"""

import sys

from hyperam_app.main import main

if __name__ == "__main__":
    sys.exit(main())

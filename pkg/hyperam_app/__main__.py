import sys

from hyperam_app.main import main

sys.exit(main())

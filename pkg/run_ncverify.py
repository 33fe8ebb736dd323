# Thin wrapper so the CLI can be started from the repo root without installing anything
import sys

import ncverify

sys.exit(ncverify.main())

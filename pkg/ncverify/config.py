"""Settings read from environment variables. Anything here can be overridden by the CLI flags of the same name."""
import os
from pathlib import Path

VERSION = "0.3.0"


def _int_from_environment(name: str, default: int) -> int:
    """Reads an integer environment variable, falling back to a default when it isn't set."""
    try:
        raw_value = os.environ[name]
    except KeyError:
        return default

    try:
        return int(raw_value)
    except ValueError:
        raise ValueError(f"environment variable {name} must be an integer, but it was set to '{raw_value}'! "
                         f"Unset it to use the default of {default}.")


# Maximum number of elementary swaps a single normal form computation may take
STEP_BUDGET = _int_from_environment("NCVERIFY_STEP_BUDGET", 1_000_000)

# Maximum number of cells in a membership matrix. 0 means work it out from the memory that is free
MATRIX_CELL_CAP = _int_from_environment("NCVERIFY_MATRIX_CELL_CAP", 0)

# Seed shared by every random sampler, so that runs are reproducible
SEED = _int_from_environment("NCVERIFY_SEED", 20211108)

# Logs end up here unless --log-dir says otherwise
LOGGING_DIR = Path(os.environ.get("NCVERIFY_LOG_DIR", "./logs"))

if STEP_BUDGET < 1:
    raise ValueError(f"NCVERIFY_STEP_BUDGET must be positive, but it was {STEP_BUDGET}!")

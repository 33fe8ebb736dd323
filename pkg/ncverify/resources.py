"""Functions for checking what the machine we're on can afford."""
import logging
import platform
import socket

import psutil

from . import config

# Rough size of one exact-integer matrix cell once python object overheads are counted
BYTES_PER_MATRIX_CELL = 96

# Never let a single membership matrix take more than this fraction of free memory
MEMORY_FRACTION_FOR_MATRICES = 0.25


def current_memory_fraction():
    """Quick function to get a basic fraction of memory being used."""
    mem_use = psutil.virtual_memory()

    return mem_use.used / mem_use.total


def matrix_cell_cap() -> int:
    """Largest membership matrix (in cells) we're willing to build right now."""
    if config.MATRIX_CELL_CAP > 0:
        return config.MATRIX_CELL_CAP

    available = psutil.virtual_memory().available
    cap = int(available * MEMORY_FRACTION_FOR_MATRICES / BYTES_PER_MATRIX_CELL)
    logging.debug(f"derived a matrix cap of {cap} cells from {available / 1024**3:.1f} GB of free memory")
    return cap


def get_system_info():
    """Returns a basic string of system information."""
    return (f"-- SYSTEM INFO --\n"
            f"hostname: {socket.gethostname()}\n"
            f"platform: {platform.system()}\n"
            f"platform-release: {platform.release()}\n"
            f"python: {platform.python_version()}\n"
            f"architecture: {platform.architecture()[0]}\n"
            f"cpu-cores: {psutil.cpu_count(logical=False)} physical, {psutil.cpu_count(logical=True)} logical\n"
            f"total-ram: {psutil.virtual_memory().total / 1024**3:.1f} GB\n"
            f"memory-in-use: {current_memory_fraction():.0%}")

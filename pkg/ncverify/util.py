"""Little helpers used all over the package."""
from datetime import datetime
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import config

Rational = Union[int, Fraction]


def string_time():
    """Returns the current time as a string, which is handy for log file names."""
    return datetime.now().strftime("%Y-%m-%d--%H:%M:%S")


def as_fraction(value: Union[int, str, Fraction]) -> Fraction:
    """Coerces a scalar to an exact Fraction. Floats are refused, since they would silently lose exactness."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"scalars must be ints or Fractions, but got {value!r}!")
    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    """Prints p/q, or just p when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def random_generator(seed: Optional[int] = None) -> np.random.Generator:
    """A numpy Generator seeded from the config unless told otherwise."""
    return np.random.default_rng(config.SEED if seed is None else seed)

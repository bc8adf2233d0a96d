
# This is an umbrella import for all submodules.
from dataclasses import dataclass, field
from typing import Union, Any, Optional, TYPE_CHECKING, cast, Iterator, TypeAlias
from typing import Generator, Iterable, Callable, NamedTuple, Literal, Sequence
import math
import regex
import numpy as np

# VERSION1 enables all types of advanced regex features.
# DOTALL makes dot match newline.
# VERBOSE allows comments and whitespace in the regex.
regex.DEFAULT_VERSION = regex.RegexFlag.VERSION1
re_flags = regex.RegexFlag.VERSION1 | regex.RegexFlag.DOTALL | \
           regex.RegexFlag.VERBOSE | regex.RegexFlag.ASCII

# Real or complex scalar, or a numpy array of them.
ArrayLike: TypeAlias = Union[float, complex, np.ndarray]
# Frequencies in eV, lengths in inverse eV.
Freq: TypeAlias = Union[float, np.ndarray]

TWO_PI = 2.0 * math.pi

### Errors ###
# ValueError descendants are caller mistakes (CLI exit 1),
# NumericalError descendants are failures of the numerics (CLI exit 2).

class DomainError(ValueError):
    """Frequency outside the real positive axis."""

class RegionError(ValueError):
    """A point is outside the region a closed form is valid in."""

class AlgebraBreakdownError(ValueError):
    """|zeta| >= 1: the independent-mode construction does not exist."""

class ConfigError(ValueError):
    """Invalid run configuration; `field` names the offending entry."""
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field

class NumericalError(ArithmeticError):
    pass

class SingularResponseError(NumericalError):
    pass

class DegenerateGeometryError(NumericalError):
    pass

class ResonanceDegeneracyError(NumericalError):
    pass

class KramersKronigError(NumericalError):
    pass

class QuadratureError(NumericalError):
    """Integration failed; `result` holds the best estimate reached."""
    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result

class PrincipalValueError(QuadratureError):
    pass

### Helpers ###

# Compensated sum, works for complex values too.
def fsum(values: Iterable[complex | float] | np.ndarray) -> complex | float:
    arr = np.asarray(values if isinstance(values, np.ndarray) else list(values))
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.ravel().tolist()), math.fsum(arr.imag.ravel().tolist()))
    return math.fsum(arr.astype(float).ravel().tolist())

# Largest relative deviation of `a` from `b`, elementwise, as a float.
def max_rel_dev(a: ArrayLike, b: ArrayLike, floor: float = 1e-300) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.size == 0:
        return 0.0
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / scale))

### Multithreading ###
# The start method can be set once per process.

_multithreading_initialized = False

def init_multithreading():
    global _multithreading_initialized
    if _multithreading_initialized:
        return
    _multithreading_initialized = True
    import multiprocessing
    multiprocessing.set_start_method('fork')  # 'fork' is faster than 'spawn'

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import unittest
import difflib
from unittest.util import _common_shorten_repr

import numpy as np

from blockzpe import *

GOLD = PRESETS["gold"]
DIELECTRIC = PRESETS["dielectric"]
VACUUM = PRESETS["vacuum"]
MODELS = (GOLD, DIELECTRIC)
L_1UM = 5.068
L_10UM = 50.68

# Lorentz mu with its band across the plasma region of eps: Re n < 0 there.
NEGATIVE_INDEX = MaterialModel(omega0=0.0, omega_p=8.0, gamma=0.1,
                               mu_model=Oscillator(omega0=4.0, omega_p=4.0, gamma=0.1),
                               name="negative-index")

def rng(seed: int = 1234) -> np.random.Generator:
    return np.random.default_rng(seed)

class TestCaseLocal(unittest.TestCase):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.maxDiff = None

    def assertRelClose(self, result, expected, rtol: float, msg=None):
        """Assert max |result - expected| / max(|result|, |expected|) < rtol elementwise."""
        dev = max_rel_dev(np.asarray(result), np.asarray(expected))
        if not dev < rtol:
            self.fail(self._formatMessage(msg, f"relative deviation {dev:.3e} >= {rtol:.0e}:\n"
                                               f"  result   {result!r}\n  expected {expected!r}"))

    def assertMultiLineEqualDiff(self, result, expected, msg=None):
        """Assert that two multi-line strings are equal."""
        self.assertIsInstance(result, str, 'First argument is not a string')
        self.assertIsInstance(expected, str, 'Second argument is not a string')

        if result.rstrip() != expected.rstrip():
            resultlines = result.splitlines(keepends=False)
            expectedlines = expected.splitlines(keepends=False)
            standardMsg = '%s != %s' % _common_shorten_repr(result, expected)
            diff = '\n' + '\n'.join(difflib.unified_diff(expectedlines, resultlines))
            standardMsg = self._truncateMessage(standardMsg, diff)
            self.fail(self._formatMessage(msg, standardMsg))

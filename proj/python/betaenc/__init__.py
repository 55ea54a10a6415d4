"""Beta-expansion A/D encoders with flaky quantizers and base recovery."""

from ._betaenc import *  # noqa: F401,F403
from ._betaenc import NumericalError, __doc__  # noqa: F401

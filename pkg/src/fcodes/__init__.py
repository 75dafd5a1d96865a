"""Function-correcting codes: protect f(u) through a noisy channel, not u.

Submodules: `bits` (words, codes, requirement matrices), `bounds` (length and
redundancy bounds), `construct` (greedy/exact/classic code builders), `fcc`
(encoders, verification, decoding), `functions` (concrete protected functions
and their specialized encoders), `simulate` (channel harness), `tables`
(redundancy comparison rows), `cli` (command-line driver).
"""

from . import functions as _functions  # registers the named function specs

from .bits import BitWord, Code, DistanceMatrix
from .fcc import FccEncoder, FunctionSpec, spec_from_string

__all__ = [
    "BitWord",
    "Code",
    "DistanceMatrix",
    "FccEncoder",
    "FunctionSpec",
    "spec_from_string",
]

del _functions

"""Compute-lane selection.

The compiled extension is preferred when importable; the numpy lane is a
drop-in replacement.  Set ``MONOSWEEP_PURE_PYTHON=1`` to force the fallback
(useful for benchmarking the two lanes against each other).
"""

import os

if os.environ.get("MONOSWEEP_PURE_PYTHON") == "1":
    from . import _pykernels as kernels

    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _pykernels as kernels

        COMPILED = False

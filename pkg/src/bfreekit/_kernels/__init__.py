"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (`_core`, built from `_core.pyx`) is preferred when
importable; `BFREEKIT_KERNEL=py` forces the fallback and `=c` insists on the
extension. Both expose the same four functions; `tests/test_kernels.py`
pins them against each other.
"""

import os

from . import _fallback

_choice = os.environ.get("BFREEKIT_KERNEL", "auto")

if _choice == "py":
    _impl = _fallback
elif _choice == "c":
    from . import _core as _impl
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
mark_multiples = _impl.mark_multiples
window_extrema = _impl.window_extrema
count_max_sweep = _impl.count_max_sweep
block_code_counts = _impl.block_code_counts


def load_backend(name):
    """Return the named kernel module ("py" or "c"); used by the benchmark."""
    if name == "py":
        return _fallback
    if name == "c":
        from . import _core

        return _core
    raise ValueError("unknown kernel backend %r" % (name,))

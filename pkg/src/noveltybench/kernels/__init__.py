"""Hot-kernel backend selection: compiled extension with pure fallback.

The compiled module (``_ext``, Cython) and the pure numpy/scipy module
(``_pure``) implement identical semantics; whichever is available is picked
at import time. Set ``NOVELTYBENCH_PURE=1`` to force the fallback (used by
the equivalence tests and the kernel benchmark).
"""

from __future__ import annotations

import os

from . import _pure

try:
    from . import _ext
except ImportError:  # extension not built; pure fallback only
    _ext = None

_FORCE_PURE = os.environ.get("NOVELTYBENCH_PURE", "") not in ("", "0")
USING_COMPILED = _ext is not None and not _FORCE_PURE

_backend = _ext if USING_COMPILED else _pure

gibbs_sweeps = _backend.gibbs_sweeps
knn_kth_cosine = _backend.knn_kth_cosine
kth_largest_with_zeros = _pure.kth_largest_with_zeros


def backend_name() -> str:
    return "compiled" if USING_COMPILED else "pure"


def available_backends() -> dict[str, object]:
    """Backends present in this installation, keyed by name."""
    out: dict[str, object] = {"pure": _pure}
    if _ext is not None:
        out["compiled"] = _ext
    return out

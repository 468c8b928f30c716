"""Hot-loop kernels with backend selection at import time.

The compiled Cython kernel is used when its extension module is importable;
otherwise the pure-Python fallback takes over. Set HGREC_KERNEL=python or
HGREC_KERNEL=cython to force a backend (forcing cython fails loudly when the
extension is missing).
"""

import os

from .pack import FilePack, tokenize

_choice = os.environ.get("HGREC_KERNEL", "auto").strip().lower() or "auto"
if _choice not in ("auto", "cython", "python"):
    raise ImportError(f"HGREC_KERNEL must be auto|cython|python, got {_choice!r}")

if _choice == "python":
    from . import _pairwise_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _pairwise_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        from . import _pairwise_py as _impl

        BACKEND = "python"

mean_similarity_row = _impl.mean_similarity_row

__all__ = ["BACKEND", "FilePack", "mean_similarity_row", "tokenize"]

"""Select the descent kernel at import: compiled extension, else numpy twin."""

from __future__ import annotations

try:
    from ._descent import descend_batch

    SEARCH_BACKEND = "compiled"
except ImportError:  # extension not built; behaviour is identical, just slower
    from ._descent_py import descend_batch

    SEARCH_BACKEND = "python"

__all__ = ["descend_batch", "SEARCH_BACKEND"]

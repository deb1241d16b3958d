"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure implementations when
the extension is unavailable or when ``DYADCONV_NO_EXT=1`` is set.  ``BACKEND``
records which one is active.
"""

import os

if os.environ.get("DYADCONV_NO_EXT") == "1":
    from . import _fallback as _impl

    BACKEND = "fallback"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "fallback"

dtw_accumulate = _impl.dtw_accumulate
df_tau_stats = _impl.df_tau_stats

__all__ = ["BACKEND", "dtw_accumulate", "df_tau_stats"]

"""Thread-cap handling for the QSK_THREADS environment variable.

Must be imported before numpy: BLAS backends read their thread-count
environment variables at load time.  QSK_THREADS=0 or unset means "auto"
(leave the backend defaults alone).
"""

import os

_BLAS_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _apply_thread_cap():
    raw = os.environ.get("QSK_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        return
    if n > 0:
        for var in _BLAS_VARS:
            os.environ.setdefault(var, str(n))


_apply_thread_cap()

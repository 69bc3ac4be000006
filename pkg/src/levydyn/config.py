import os

THREADS_ENV = "LEVYDYN_THREADS"


def thread_count() -> int | None:
    """Worker count for FFTs, read from ``LEVYDYN_THREADS`` (unset means 1)."""
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return n if n > 0 else None

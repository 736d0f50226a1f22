import os

THREADS_ENV = "MORSE_BRIDGE_THREADS"


def thread_count() -> int:
    """Worker cap from ``MORSE_BRIDGE_THREADS`` (default 1)."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1

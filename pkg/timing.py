import functools
import logging
import time
from contextlib import contextmanager

from colors import Colors

durations: dict[str, float] = {}


@contextmanager
def timer_cm(name):
    start = time.perf_counter()
    try:
        yield
    finally:
        record(name, start, time.perf_counter())


def record(name, start, end):
    """Logs the elapsed time and accumulates it under name."""
    elapsed = end - start
    durations[name] = durations.get(name, 0.0) + elapsed
    logging.getLogger("timing").info(f"  * {name}: {Colors.GREY}{elapsed * 1000:.2f} ms{Colors.END}")


def timer_dec(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            record(func.__name__, start, time.perf_counter())
    return wrapper


def timer(arg):
    if isinstance(arg, str):
        return timer_cm(arg)
    else:
        return timer_dec(arg)

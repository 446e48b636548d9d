"""Run structurally recursive work on a thread with a large stack.

CPython spends C stack for every Python-level call (roughly half a
kilobyte per frame on this interpreter), so deeply nested terms blow the
default 8 MB main stack long before any memory pressure. Everything in
this package that recurses over terms or values can be routed through
run_deep, which executes the call on a worker thread with a big stack
and a matching recursion limit.
"""

from __future__ import annotations

import sys
import threading
from typing import Any, Callable

DEFAULT_STACK_BYTES = 512 * 1024 * 1024
DEFAULT_RECURSION_LIMIT = 300_000


def run_deep(
    fn: Callable[..., Any],
    *args: Any,
    stack_bytes: int = DEFAULT_STACK_BYTES,
    recursion_limit: int = DEFAULT_RECURSION_LIMIT,
    **kwargs: Any,
) -> Any:
    """Call fn(*args, **kwargs) on a big-stack thread and return its result.

    Exceptions raised by fn propagate to the caller. The interpreter
    recursion limit is raised for the duration of the call (it is a
    process-wide setting) and restored afterwards.
    """
    outcome: list[Any] = []
    error: list[BaseException] = []
    old_limit = sys.getrecursionlimit()

    def work() -> None:
        try:
            sys.setrecursionlimit(max(recursion_limit, old_limit))
            outcome.append(fn(*args, **kwargs))
        except BaseException as exc:  # re-raised on the calling thread
            error.append(exc)

    old_stack = threading.stack_size(stack_bytes)
    try:
        thread = threading.Thread(target=work, name="ordlam-deep")
        thread.start()
        thread.join()
    finally:
        threading.stack_size(old_stack)
        sys.setrecursionlimit(old_limit)
    if error:
        raise error[0]
    return outcome[0]

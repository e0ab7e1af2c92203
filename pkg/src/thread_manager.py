import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

debug = logging.getLogger("ergdiv")


class ThreadManager:
    """
    Bounded worker pool shared by the commands.

    Results always come back in input order, so output never depends on
    which worker finished first. With ``threads=1`` work runs inline.
    """

    def __init__(self, threads: int = 1, name: str = "ergdiv"):
        self.threads = max(1, int(threads))
        self.name = name
        self._executor: Optional[ThreadPoolExecutor] = None

    def __enter__(self) -> "ThreadManager":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()

    def _pool(self) -> ThreadPoolExecutor:
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix=self.name)
            debug.debug(f"Started {self.threads} worker threads")
        return self._executor

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T], label: Callable[[T], str] = str) -> List[R]:
        """
        Apply ``fn`` to every item and return the results in input order.

        A failing job is logged with its label and the first failure (in
        input order) is re-raised once every job has settled.
        """
        items = list(items)
        if self.threads == 1 or len(items) <= 1:
            results = []
            for item in items:
                try:
                    results.append(fn(item))
                except Exception:
                    debug.error(f"Job {label(item)} failed")
                    raise
            return results

        futures = [self._pool().submit(fn, item) for item in items]
        results: List[R] = []
        first_error: Optional[BaseException] = None
        for item, future in zip(items, futures):
            try:
                results.append(future.result())
            except Exception as e:
                debug.error(f"Job {label(item)} failed: {e}")
                if first_error is None:
                    first_error = e
        if first_error is not None:
            raise first_error
        return results

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

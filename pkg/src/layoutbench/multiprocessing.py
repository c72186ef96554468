"""
Multi-processing
~~~~~~~~~~~~~~~~

A ``multiprocessing`` pool whose workers start with the parent's settings, and
:func:`ordered_map` which keeps results in input order whatever the pool size.

"""

import logging
from collections.abc import Callable, Iterable, Sequence
from io import BytesIO
from multiprocessing.pool import Pool as _Pool
from typing import Any, TypeVar

from .conf import export_settings, restore_settings

__all__ = ("Pool", "ordered_map")

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def settings_initializer(pickled_settings: bytes, initializer, init_args):
    """Restore the parent's settings in a worker."""
    restore_settings(BytesIO(pickled_settings))
    if initializer:
        initializer(*init_args)


def prepare_settings() -> bytes:
    file = BytesIO()
    export_settings(file)
    return file.getvalue()


class Pool(_Pool):
    """Drop-in ``multiprocessing.pool.Pool`` with configured settings in every worker."""

    def __init__(
        self,
        processes: int | None = None,
        initializer: Callable | None = None,
        initargs: Sequence[Any] = (),
        maxtasksperchild: int | None = None,
        context: Any = None,
    ):
        if initializer is not None and not callable(initializer):
            raise TypeError("initializer must be a callable")
        super().__init__(
            processes,
            settings_initializer,
            (prepare_settings(), initializer, initargs),
            maxtasksperchild,
            context,
        )

    def __reduce__(self):
        raise NotImplementedError("pool objects cannot be passed between processes or pickled")


def ordered_map(func: Callable[[T], R], items: Iterable[T], processes: int = 1) -> list[R]:
    """``[func(item) for item in items]``, fanned out over ``processes`` workers.

    ``func`` must be picklable when ``processes > 1``.
    """
    if processes < 1:
        raise ValueError("processes must be at least 1")
    if processes == 1:
        return [func(item) for item in items]

    logger.debug("Mapping over a pool of %d processes", processes)
    with Pool(processes) as pool:
        return list(pool.imap(func, items, chunksize=8))

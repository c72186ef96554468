"""
Checks Registry
~~~~~~~~~~~~~~~

Location for registering and listing checks.

"""

import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from itertools import chain
from typing import NamedTuple

from ..conf import Settings, settings
from .messages import CheckMessage, UnhandledException

__all__ = ("Check", "CheckRegistry", "CheckResult", "Tags", "import_checks", "register", "registry")

logger = logging.getLogger(__name__)


class Tags:
    """Suite tags; one per library module under test."""

    scene_graph = "scene_graph"
    metrics = "metrics"
    rewards = "rewards"
    grpo = "grpo"
    closure = "closure"


Check = Callable[..., CheckMessage | Sequence[CheckMessage] | None]


class CheckResult(NamedTuple):
    check: Check
    messages: Sequence[CheckMessage]


class CheckRegistry(list[Check]):
    """Registry list for checks."""

    def register(self, check: Check | str | None = None, *tags: str):
        """Register ``check`` labelled with ``tags``; usable as a decorator
        with or without tags.
        """

        def inner(func: Check) -> Check:
            func._check__tags = tags
            if func not in self:
                self.append(func)
            return func

        if callable(check):
            return inner(check)

        if check:
            tags += (check,)
        return inner

    def checks_by_tags(self, tags: Iterable[str] | None = None) -> Iterator[Check]:
        """Checks carrying any of ``tags``; all checks when no tags are given."""
        if tags:
            tags = set(tags)
            return (check for check in self if set(getattr(check, "_check__tags", ())) & tags)
        return iter(self)

    def run_checks_iter(
        self,
        tags: Iterable[str] | None = None,
        pre_callback: Callable[[Check], None] | None = None,
        check_settings: Settings | None = None,
    ) -> Iterator[CheckResult]:
        """Run the selected checks, yielding each result as it completes.

        :param tags: Only run checks with one of these tags.
        :param pre_callback: Called with each check before it runs.

        """
        check_kwargs = {"settings": check_settings or settings}

        for check in self.checks_by_tags(tags):
            if pre_callback:
                pre_callback(check)

            try:
                messages = check(**check_kwargs)
            except Exception:  # noqa: BLE001
                logger.debug("Check %s raised", check.__name__, exc_info=True)
                messages = UnhandledException(obj=check.__name__)

            if isinstance(messages, CheckMessage):
                yield CheckResult(check, (messages,))
            elif messages:
                yield CheckResult(check, tuple(messages))
            else:
                yield CheckResult(check, ())

    def run_checks(self, tags: Iterable[str] | None = None) -> Sequence[CheckMessage]:
        """Run the selected checks and return every message."""
        return tuple(chain.from_iterable(r.messages for r in self.run_checks_iter(tags)))


registry = CheckRegistry()
register = registry.register
run_checks = registry.run_checks


def import_checks():
    """Import the modules named by ``CHECK_LOCATIONS`` so their checks register."""
    for location in settings.CHECK_LOCATIONS:
        __import__(location)

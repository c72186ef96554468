"""
Batch generation
~~~~~~~~~~~~~~~~

Generates ``count`` instances of one task. Size parameters may be fixed values
or inclusive ranges sampled per instance; parameters that turn out infeasible
are resampled a bounded number of times.

Instances depend only on ``(seed, index)``, so any number of worker processes
produce the same records in the same order.

"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from functools import partial
from typing import Any

import numpy as np

from ..exceptions import GenerationError
from ..multiprocessing import ordered_map
from ..tasks import TaskInstance, TaskKind
from ..utils import text_to_bool
from .alignment import AlignmentParams, gen_alignment
from .roomedit import RoomeditParams, gen_roomedit
from .seeding import parameter_rng
from .sorting import SortingParams, gen_sorting

__all__ = ("DEFAULT_RANGES", "ParamRange", "generate", "generate_one")

logger = logging.getLogger(__name__)

DEFAULT_MAX_RESAMPLES = 20


@dataclass(frozen=True)
class ParamRange:
    """Inclusive range; integer bounds sample integers."""

    low: float
    high: float

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError(f"range {self.low}:{self.high} is empty")

    def __str__(self) -> str:
        return f"{self.low}:{self.high}"

    @property
    def integral(self) -> bool:
        return isinstance(self.low, int) and isinstance(self.high, int)

    def sample(self, rng: np.random.Generator) -> float:
        if self.integral:
            return int(rng.integers(self.low, self.high + 1))
        return round(float(rng.uniform(self.low, self.high)), 6)

    @classmethod
    def parse(cls, text: str) -> "ParamRange | int | float":
        """Parse ``"N"`` or ``"LO:HI"``."""

        def number(value: str):
            value = value.strip()
            try:
                return int(value)
            except ValueError:
                return float(value)

        if ":" not in text:
            return number(text)
        low, _, high = text.partition(":")
        return cls(number(low), number(high))


Value = int | float | ParamRange

DEFAULT_RANGES: dict[TaskKind, dict[str, Value]] = {
    TaskKind.SORTING: {"objects": ParamRange(4, 12), "groups": ParamRange(2, 3)},
    TaskKind.ALIGNMENT: {
        "rows": ParamRange(3, 5),
        "cols": ParamRange(3, 6),
        "perturb": ParamRange(0.2, 0.4),
    },
    TaskKind.ROOMEDIT: {"existing": ParamRange(3, 8), "refs": ParamRange(2, 3)},
}

PARAMS_TYPES = {
    TaskKind.SORTING: SortingParams,
    TaskKind.ALIGNMENT: AlignmentParams,
    TaskKind.ROOMEDIT: RoomeditParams,
}


def _coerce(default: Any, value: Any) -> Any:
    if not isinstance(value, str):
        return value
    if isinstance(default, bool):
        return text_to_bool(value)
    if isinstance(default, tuple):
        return tuple(float(item) for item in value.split(","))
    if isinstance(default, (int, float)):
        return type(default)(value)
    return value


def build_params(task: TaskKind, extra: Mapping[str, Any]):
    """Generator parameter object with ``extra`` applied over the defaults.

    :raises GenerationError: unknown parameter name or value of the wrong type.
    """
    params_type = PARAMS_TYPES[task]
    defaults = params_type()
    known = {field.name for field in fields(params_type)}
    values = {}
    for name, value in extra.items():
        if name not in known:
            raise GenerationError(
                f"unknown {task.value} parameter {name!r}; expected one of {', '.join(sorted(known))}"
            )
        try:
            values[name] = _coerce(getattr(defaults, name), value)
        except ValueError:
            raise GenerationError(f"invalid value {value!r} for {name}") from None
    return params_type(**values)


def _generate(task: TaskKind, seed: int, index: int, attempt: int, sizes: dict[str, Any], params):
    if task is TaskKind.SORTING:
        return gen_sorting(
            seed,
            sizes["objects"],
            replace(params, n_groups=min(sizes["groups"], sizes["objects"])),
            index=index,
            attempt=attempt,
        )
    if task is TaskKind.ALIGNMENT:
        return gen_alignment(
            seed, sizes["rows"], sizes["cols"], sizes["perturb"], params, index=index, attempt=attempt
        )
    return gen_roomedit(seed, sizes["existing"], sizes["refs"], params, index=index, attempt=attempt)


def generate_one(
    task: TaskKind | str,
    seed: int,
    index: int,
    *,
    sizes: Mapping[str, Value] | None = None,
    extra: Mapping[str, Any] | None = None,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
) -> TaskInstance:
    """Generate instance ``index`` of a batch.

    :raises GenerationError: every resample was infeasible.
    """
    task = TaskKind(task)
    ranges = {**DEFAULT_RANGES[task], **(sizes or {})}
    params = build_params(task, extra or {})

    error = None
    for attempt in range(max_resamples):
        rng = parameter_rng(seed, index, attempt)
        sampled = {
            name: value.sample(rng) if isinstance(value, ParamRange) else value
            for name, value in sorted(ranges.items())
        }
        try:
            return _generate(task, seed, index, attempt, sampled, params)
        except GenerationError as ex:
            logger.debug("Resampling %s instance %d (%s)", task.value, index, ex)
            error = ex
    raise GenerationError(
        f"{task.value} instance {index} infeasible after {max_resamples} attempts: {error}"
    )


def generate(
    task: TaskKind | str,
    count: int,
    seed: int,
    *,
    sizes: Mapping[str, Value] | None = None,
    extra: Mapping[str, Any] | None = None,
    processes: int = 1,
) -> list[TaskInstance]:
    """Generate ``count`` instances in index order."""
    task = TaskKind(task)
    unknown = set(sizes or {}) - set(DEFAULT_RANGES[task])
    if unknown:
        raise GenerationError(f"{task.value} does not take {', '.join(sorted(unknown))}")

    logger.info("Generating %d %s instances (seed %d)", count, task.value, seed)
    worker = partial(generate_one, task, seed, sizes=dict(sizes or {}), extra=dict(extra or {}))
    return ordered_map(worker, range(count), processes)

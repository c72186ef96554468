"""
Oracle Solvers
~~~~~~~~~~~~~~

Rule based solvers computing the target graph of an instance from its initial
graph and spec. They double as ground truth constructors, verification oracles
and a reference "perfect policy".

.. autofunction:: solve

.. autofunction:: solve_sorting

.. autofunction:: solve_alignment

.. autofunction:: solve_placement

.. autofunction:: verify

"""

from ..tasks import TaskInstance, TaskKind
from .alignment import DEFAULT_OUTLIER_FRACTION, solve_alignment
from .base import Pose, SolveResult, SolveStep, replay
from .placement import circle_intersections, placement_candidates, solve_placement
from .sorting import solve_sorting
from .verify import ConstraintCheck, VerifyReport, verify

__all__ = (
    "ConstraintCheck",
    "Pose",
    "SolveResult",
    "SolveStep",
    "VerifyReport",
    "circle_intersections",
    "placement_candidates",
    "replay",
    "solve",
    "solve_alignment",
    "solve_placement",
    "solve_sorting",
    "verify",
)


def solve(
    instance: TaskInstance,
    *,
    use_hints: bool = False,
    outlier_fraction: float = DEFAULT_OUTLIER_FRACTION,
    **placement_options,
) -> SolveResult:
    """Dispatch ``instance`` to the solver of its task."""
    if instance.task is TaskKind.SORTING:
        return solve_sorting(instance.initial_graph, instance.spec)
    if instance.task is TaskKind.ALIGNMENT:
        return solve_alignment(
            instance.initial_graph,
            instance.spec if use_hints else None,
            outlier_fraction=outlier_fraction,
        )
    return solve_placement(instance.initial_graph, instance.spec, **placement_options)

"""
Benchmark Generation
~~~~~~~~~~~~~~~~~~~~

Seeded procedural generators for the three editing tasks. Each produces a
:class:`~layoutbench.tasks.TaskInstance` holding the instruction, the structured
constraint spec, the initial graph and the target graph. Output is a pure
function of the seed and parameters.

.. autofunction:: gen_sorting

.. autofunction:: gen_alignment

.. autofunction:: gen_roomedit

.. autofunction:: generate

.. autofunction:: write_dataset

.. autofunction:: read_dataset

"""

from ..tasks import (
    GridSpec,
    PlacementSpec,
    Reference,
    SortSpec,
    TaskInstance,
    TaskKind,
)
from .alignment import AlignmentParams, gen_alignment
from .batch import DEFAULT_RANGES, ParamRange, generate, generate_one
from .dataset import read_dataset, write_dataset
from .prompts import render_prompt
from .roomedit import RoomeditParams, gen_roomedit
from .sorting import SortingParams, gen_sorting

__all__ = (
    "DEFAULT_RANGES",
    "AlignmentParams",
    "GridSpec",
    "ParamRange",
    "PlacementSpec",
    "Reference",
    "RoomeditParams",
    "SortSpec",
    "SortingParams",
    "TaskInstance",
    "TaskKind",
    "gen_alignment",
    "gen_roomedit",
    "gen_sorting",
    "generate",
    "generate_one",
    "read_dataset",
    "render_prompt",
    "write_dataset",
)

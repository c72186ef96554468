"""
Exceptions
~~~~~~~~~~

Collection of standard exceptions.

Everything a command can raise because of bad input derives from
:class:`LayoutBenchError`; the CLI maps those onto exit code 2.

"""

from collections.abc import Sequence
from typing import Optional


class ApplicationExit(SystemExit):
    """Exception used to directly exit the application.

    Will be caught by the CliApplication instance."""

    def __init__(self, status_code: int, message: Optional[str] = None):
        super().__init__(status_code)
        self.status_code = status_code
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Application exit: {self.status_code}"


class InvalidConfiguration(Exception):
    """
    Invalid configuration was detected.
    """


class UnsupportedContentType(InvalidConfiguration):
    """
    Content type of the settings file is not supported
    """


class InvariantViolation(Exception):
    """
    An internal invariant did not hold (exit code 3).
    """


class LayoutBenchError(Exception):
    """
    Base of all data and validation errors.
    """


class SceneGraphError(LayoutBenchError):
    """
    Scene graph could not be read.
    """


class GraphParseError(SceneGraphError, ValueError):
    """
    Scene graph text is not valid JSON.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class GraphValidationError(SceneGraphError, ValueError):
    """
    A node is missing a field or a field value breaks an invariant.
    """

    def __init__(self, node_id, field: str, message: str):
        super().__init__(f"node {node_id}: {field}: {message}")
        self.node_id = node_id
        self.field = field


class GeometryError(LayoutBenchError, ValueError):
    """
    Geometric operation is undefined for the supplied boxes.
    """


class GenerationError(LayoutBenchError):
    """
    Generator parameters are infeasible.
    """


class SolverError(LayoutBenchError):
    """
    Oracle solver could not produce a target graph.
    """


class InfeasibleError(SolverError):
    """
    No layout satisfies the constraints.
    """

    def __init__(self, message: str, best_residual: Optional[float] = None):
        if best_residual is not None:
            message = f"{message} (best residual {best_residual:.6g})"
        super().__init__(message)
        self.best_residual = best_residual


class UnknownGroupLabel(SolverError):
    """
    Group label is not present in both the SortSpec and the graph.
    """

    def __init__(self, label: str, message: str):
        super().__init__(f"{message}: {label!r}")
        self.label = label


class InsufficientAnchors(SolverError):
    """
    A grid line has fewer than two in-place anchors.
    """

    def __init__(self, line: float, count: int):
        super().__init__(f"grid line at {line:g} has {count} anchor(s); 2 required")
        self.line = line
        self.count = count


class DatasetError(LayoutBenchError):
    """
    Dataset or predictions file could not be read or written.
    """

    def __init__(self, path, message: str, line: Optional[int] = None):
        location = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line


class UnknownPredictionIds(LayoutBenchError):
    """
    Predictions reference instances that are not in the manifest.
    """

    def __init__(self, ids: Sequence[str]):
        shown = ", ".join(ids[:10])
        more = f" (+{len(ids) - 10} more)" if len(ids) > 10 else ""  # noqa: PLR2004
        super().__init__(f"unknown prediction ids: {shown}{more}")
        self.ids = tuple(ids)


class InvalidSpec(LayoutBenchError, ValueError):
    """
    Task spec or dataset record is malformed.
    """


class InvalidRollout(LayoutBenchError, ValueError):
    """
    Rollout group arrays are inconsistent or not finite.
    """

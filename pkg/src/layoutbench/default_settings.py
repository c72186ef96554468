"""
Default settings
~~~~~~~~~~~~~~~~

Every key can be overridden by a settings file passed with ``--settings`` (or
named by ``LAYOUTBENCH_SETTINGS``); command line flags win over both.

"""

from .conf.typed_settings import SettingsDef


class SceneSettings(SettingsDef):
    CONTAINMENT_THRESHOLD: float = 0.95
    """Fraction of a child's volume inside a container for a containment edge."""

    CONTACT_GAP: float = 0.01
    """Largest face gap (m) still counted as contact."""


class EvalSettings(SettingsDef):
    """Evaluation and reporting."""

    COLLISION_EPS: float = 1e-6
    """Intersection volume (m³) above which two objects collide."""

    IOU_THRESHOLDS: list[float] = [0.5]
    """Thresholds reported as IoU@x."""

    SORT_AXIS: str | None = None
    """Axis for edit distance; ``None`` uses each instance's own sort axis."""

    REPORT_FORMAT: str = "text-table"
    """One of ``text-table``, ``json`` or ``csv``."""


class RewardSettings(SettingsDef):
    """Composite reward weights."""

    REWARD_LAMBDA1: float = 0.2
    """Weight of the collision term."""

    REWARD_LAMBDA2: float = 0.2
    """Weight of the format term."""

    FORMAT_RUBRIC: dict[str, float] = {}
    """
    Overrides for the format rubric weights, e.g.::

        FORMAT_RUBRIC = {"tags": 0.4, "think_json": 0.3, "answer_json": 0.3}

    """


class SolverSettings(SettingsDef):
    ALIGNMENT_OUTLIER_FRACTION: float = 0.25
    PLACEMENT_TOLERANCE: float = 1e-9
    PLACEMENT_MAX_ITERATIONS: int = 100


class GrpoSettings(SettingsDef):
    GRPO_CLIP_EPS: float = 0.2
    GRPO_KL_BETA: float = 0.01
    GRPO_STD_FLOOR: float = 1e-8


class RunSettings(SettingsDef):
    """Batch runs."""

    PARALLELISM: int = 1
    """Worker processes for per-instance work."""

    SEED: int = 0

    DEFAULT_COUNTS: dict[str, int] = {"sorting": 10000, "alignment": 1000, "roomedit": 4000}
    """Instances generated by ``gen`` when ``--count`` is not given."""


class SelftestSettings(SettingsDef):
    SELFTEST_INSTANCES: int = 50
    """Fresh instances per task for the oracle closure suite."""

    SELFTEST_IOU_PAIRS: int = 50
    SELFTEST_IOU_SAMPLES: int = 200_000


CHECK_LOCATIONS = ["layoutbench.checks.built_in"]

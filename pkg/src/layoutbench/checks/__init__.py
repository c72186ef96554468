"""
Checks
~~~~~~

*Embedded invariant suites run by the ``selftest`` command.*

A check is a function accepting the ``settings`` instance that returns nothing when
the property holds, or one or many messages describing what went wrong. Messages come
as Debug, Info, Warn, Error and Critical varieties mirroring the logging levels; any
message at Error or above fails the self-test. An exception raised by a check is
reported as an error with the traceback as its hint.

An example check::

    from layoutbench.checks import Error, Tags, register

    @register(Tags.metrics)
    def iou_identity(settings, **_):
        box = Aabb(Vec3(0, 0, 0), Vec3(1, 1, 1))
        if iou3d(box, box) != 1.0:
            return Error("IoU of a box with itself is not 1", obj="metrics.iou_identity")

Checks register when their module is imported; ``CHECK_LOCATIONS`` lists the modules
imported before a run.

"""

from .messages import *  # noqa: F403
from .registry import Tags, register  # noqa: F401

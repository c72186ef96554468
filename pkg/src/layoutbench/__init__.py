"""
###########################################################
layoutbench - Deterministic 3D layout editing benchmark kit
###########################################################

*Scene graphs, metrics, rewards, generators and oracle solvers for
sorting, grid alignment and room editing tasks.*

"""

import logging
from importlib import metadata

__all__ = ("get_installed_version",)

# Configure a default null handler for logging.
logging.getLogger(__name__).addHandler(logging.NullHandler())


def get_installed_version(package_name: str = "layoutbench") -> str:
    """Version of the installed distribution."""
    try:
        return metadata.version(package_name)
    except metadata.PackageNotFoundError:
        return f"Please install {package_name} via a package."


__version__ = get_installed_version()

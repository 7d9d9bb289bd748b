"""Adaptive relation-tuning data curation engine."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:
    # Build-tree layout: the extension sits outside the package directory.
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401

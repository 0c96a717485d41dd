"""dwmerge: automatic schema- and instance-level merging of star-schema warehouses."""

__version__ = "0.1.0"

from .config import MergeSettings  # noqa: E402
from .matching import MatcherConfig  # noqa: E402

__all__ = ["__version__", "MergeSettings", "MatcherConfig", "merge_stars",
           "load_dw", "write_dw", "write_report"]


def __getattr__(name):
    # late imports keep the package import light and cycle-free
    if name == "merge_stars":
        from .star_merge import merge_stars
        return merge_stars
    if name in ("load_dw", "write_dw", "write_report"):
        from . import io as _io
        return getattr(_io, name)
    raise AttributeError(name)

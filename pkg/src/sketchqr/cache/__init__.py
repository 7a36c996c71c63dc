"""Disk cache for generated matrices."""

from .cache import MatrixCache

__all__ = ["MatrixCache"]

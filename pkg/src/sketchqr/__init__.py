"""sketchqr: randomized column-pivoted QR for tall matrices."""

__version__ = "0.1.0"

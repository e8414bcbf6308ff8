"""Distance-from-start profiles of random walks on groups and graphs."""

__version__ = "0.1.0"

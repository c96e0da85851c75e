"""wsst - command line interface for the reconstruction experiments."""

__version__ = "1.0.0"

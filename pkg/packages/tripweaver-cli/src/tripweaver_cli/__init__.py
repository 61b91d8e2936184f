"""The ``tripweaver`` command line."""

__version__ = "1.0.0"

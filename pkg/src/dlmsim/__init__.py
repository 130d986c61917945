"""Event-by-event simulation of interference and Bell-type experiments."""

__version__ = "0.1.0"

"""Version information for speedlimitpy."""

__version__ = "0.1.0"

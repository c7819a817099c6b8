"""Version information for cinenet package."""

__version__ = "0.1.0"

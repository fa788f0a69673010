"""Exact toolkit for toric GIT data, blow-ups, total spaces and their cohomology."""

__version__ = "0.1.0"

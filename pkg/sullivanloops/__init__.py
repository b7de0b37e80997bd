"""sullivanloops: exact string topology on Sullivan models of free loop spaces."""

__version__ = "1.0.0"

"""Category and topological complexity workbench."""

__version__ = "0.1.0"

"""jreal: realizability workbench over a fueled combinatory engine."""

__version__ = "0.1.0"

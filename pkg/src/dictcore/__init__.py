"""Definition-graph analysis: core extraction, loop structure, decomposition."""

__version__ = "0.1.0"

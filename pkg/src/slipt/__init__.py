"""Link-level modeling and optimization for simultaneous lightwave information
and power transfer (SLIPT) over indoor optical wireless links."""

__version__ = "0.1.0"

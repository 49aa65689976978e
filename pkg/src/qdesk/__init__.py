"""qdesk: desk-scale quantum simulation and quantum-ML laboratory."""

__version__ = "0.1.0"

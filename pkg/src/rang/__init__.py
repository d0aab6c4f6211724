"""Random anonymized network generator for covert-network analytics."""

__version__ = "0.1.0"

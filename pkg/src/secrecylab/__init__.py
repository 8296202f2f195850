"""secrecylab - finite-blocklength wiretap coding lab."""

__version__ = "0.1.0"

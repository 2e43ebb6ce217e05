"""Generalized tree shifts and distance spectra of tree complements."""

__version__ = "0.1.0"

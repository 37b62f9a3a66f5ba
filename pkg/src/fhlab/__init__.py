"""Toeplitz determinants and spectra for symbols with one jump singularity."""
__version__ = "0.1.0"

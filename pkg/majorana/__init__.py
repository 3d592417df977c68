"""Majorana spin-flip escape rates for magnetically trapped atoms."""

__version__: str = "0.1.0"

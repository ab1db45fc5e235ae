"""Interpreter and dataset toolkit for two small lambda calculi."""

__version__ = "0.1.0"

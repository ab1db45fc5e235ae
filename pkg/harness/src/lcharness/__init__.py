"""Seq2seq harness: train a small encoder-decoder on aligned term files."""

__version__ = "0.1.0"

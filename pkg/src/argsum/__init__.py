"""Argument summarization systems and reference-based evaluation metrics."""

__version__ = "0.1.0"

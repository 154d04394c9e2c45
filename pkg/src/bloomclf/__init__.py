"""Bloom's-taxonomy question analysis: complexity metrics and classical classifiers."""

__version__ = "0.1.0"

"""Secure and resilient coding for distributed storage systems under repair."""

__version__ = "0.1.0"

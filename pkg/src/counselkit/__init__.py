"""Multimodal emotion-sensing toolkit for counseling session support."""

__version__ = "0.1.0"

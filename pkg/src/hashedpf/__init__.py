"""Hashed quantum period finding: closed-form tables, a dense simulator, and attacks built on them."""

__version__ = "0.1.0"

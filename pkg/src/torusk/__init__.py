"""Exact equivariant cohomology and K-theory of finite group actions on tori."""

__version__ = "0.1.0"

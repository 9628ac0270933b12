"""
Interfaces modülü - kmtlab komut satırı
"""

from .cli import cli, main

__all__ = ["cli", "main"]

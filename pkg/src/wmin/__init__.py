"""Minimal W-algebras of basic Lie superalgebras: unitarity bounds, characters and
denominator identities in exact rational arithmetic."""

from __future__ import annotations

__version__ = "0.1.0"

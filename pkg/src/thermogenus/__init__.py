"""Exact genus series and verified harmonic-oscillator thermodynamics."""
from __future__ import annotations

__version__ = "0.1.0"

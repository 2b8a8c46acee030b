"""Chekanov–Eliashberg DGAs of Legendrian knots, augmentations, cobordism maps and A-infinity structures."""
from __future__ import annotations

__version__ = "0.1.0"

"""Exact algebra for automorphisms of two-cusped holonomy varieties and Dehn-filling symmetries."""

from __future__ import annotations

__version__ = "0.1.0"

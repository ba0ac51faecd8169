"""Expansive subdynamics of algebraic Z^d-actions."""

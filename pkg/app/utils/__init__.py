"""Numerical helpers shared by the engine and the checks."""

"""Spectral toolkit for the dislocated Dirac operator."""

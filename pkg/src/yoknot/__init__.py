"""Framed and affine Yokonuma-Hecke algebras, their traces, representations and link invariants."""

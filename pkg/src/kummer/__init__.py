"""Finite Kummer structures: construction, axiom checking, group recovery
and classification."""

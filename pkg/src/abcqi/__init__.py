"""Quasi-isometry classification of abelian-by-cyclic groups."""

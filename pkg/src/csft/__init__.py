"""Crossed simplicial field theories: combinatorics and exact evaluation."""

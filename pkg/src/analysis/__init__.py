"""Distributions, diversity indices, corpus comparison and parse statistics."""

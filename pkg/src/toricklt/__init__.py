"""Exact toric tools for klt-type quotient singularities."""

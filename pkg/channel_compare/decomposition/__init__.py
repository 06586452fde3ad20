"""Unique information and its brute-force oracle."""

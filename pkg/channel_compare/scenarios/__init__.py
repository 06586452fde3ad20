"""Worked examples and parameterized families."""

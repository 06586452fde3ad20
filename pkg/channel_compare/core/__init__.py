"""Core models, probability functionals and exceptions."""

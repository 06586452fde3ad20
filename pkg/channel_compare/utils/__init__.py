"""Utility modules: logging and settings."""

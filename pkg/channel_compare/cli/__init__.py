"""Command-line interface for channel comparison."""

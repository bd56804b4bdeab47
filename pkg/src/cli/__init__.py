"""Command-line entry point (``mp2s``)."""

"""Integration tests."""

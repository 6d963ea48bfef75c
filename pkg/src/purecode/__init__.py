"""Incomplete-syndrome purification codes."""

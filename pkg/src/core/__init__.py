"""Shared infrastructure: exceptions, metrics and serialization."""

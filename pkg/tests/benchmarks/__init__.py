"""Benchmarks for ddgate."""

"""Benchmarks and profiling for ipdsaw."""

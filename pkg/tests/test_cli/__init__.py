"""
Command-line tests.

This package contains tests for the mevace entry point and its exit codes.
"""

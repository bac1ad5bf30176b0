"""
Script tests.

This package contains tests for utility scripts such as archive initialization.
"""

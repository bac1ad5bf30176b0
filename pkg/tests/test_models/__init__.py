"""
Model tests.

This package contains tests for the run archive models and their crud helpers.
"""

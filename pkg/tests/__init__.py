"""
MEV-ACE Lab test suite.
"""

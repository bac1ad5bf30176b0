"""
Service layer tests.

This package contains tests for the protocol services: codec, signatures,
identity, commit and open phases, ordering, accountability, economics and
the slot simulator.
"""

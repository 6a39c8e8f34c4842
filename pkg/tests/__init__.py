"""
Tests for the quadrinomial S-box toolkit.
"""

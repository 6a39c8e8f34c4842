"""
Unit tests for the field, family, table and theory layers.
"""

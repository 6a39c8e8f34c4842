"""
Integration tests for search campaigns.
"""

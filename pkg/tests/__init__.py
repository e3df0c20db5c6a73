# tests/__init__.py
"""
Unit tests for the speedlimitpy library.
"""

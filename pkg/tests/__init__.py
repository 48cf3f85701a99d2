"""Test suite for Raton."""

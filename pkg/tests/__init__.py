"""Tests for Induced Forest Bounds."""

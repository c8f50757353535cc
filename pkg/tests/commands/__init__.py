"""Tests for the scatterchain command line."""

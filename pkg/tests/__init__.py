"""Tests for the lp-hodge package."""

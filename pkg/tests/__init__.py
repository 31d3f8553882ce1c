"""Tests for the netcoherence package."""

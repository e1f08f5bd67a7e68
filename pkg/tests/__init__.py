"""Tests for sis-rdhei."""

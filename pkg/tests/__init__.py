"""Tests for the realclifford package."""

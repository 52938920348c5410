"""Shared fixtures."""

import pytest

from realclifford import rule_store


@pytest.fixture(autouse=True)
def isolated_rule_cache(tmp_path, monkeypatch):
    """Keep derived rule databases out of the home directory."""
    monkeypatch.setattr(rule_store, "RULES_DIR", tmp_path / "rule-cache")

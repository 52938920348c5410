"""On-disk cache for derived rule databases."""

import hashlib
import os
from pathlib import Path
from typing import Optional


RULES_DIR = Path.home() / ".realclifford" / "rules"


def _key_for_catalogue(catalogue: str) -> str:
    """Return a SHA-256 hash of the window catalogue for use as a filename."""
    return hashlib.sha256(catalogue.encode()).hexdigest()


def get_rules(catalogue: str) -> Optional[str]:
    """Load the cached rule file text for a catalogue, or None if not found."""
    path = RULES_DIR / f"{_key_for_catalogue(catalogue)}.rules"
    if not path.exists():
        return None
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError):
        return None


def save_rules(catalogue: str, text: str) -> Path:
    """Persist rule file text for a catalogue and return its path."""
    RULES_DIR.mkdir(parents=True, exist_ok=True)
    path = RULES_DIR / f"{_key_for_catalogue(catalogue)}.rules"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
    return path


def clear_rules(catalogue: str) -> None:
    """Delete the cached rule file for a catalogue."""
    path = RULES_DIR / f"{_key_for_catalogue(catalogue)}.rules"
    if path.exists():
        path.unlink()

"""Bundled FCIDUMP fixtures (linear H chains in STO-3G)."""
from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Absolute path of a bundled FCIDUMP fixture or manifest."""
    return Path(resources.files(__name__) / "fcidump" / name)


def fixture_dir() -> Path:
    return Path(resources.files(__name__) / "fcidump")

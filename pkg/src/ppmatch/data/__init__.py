"""Bundled English-Spanish fixture resources."""
from importlib import resources
from pathlib import Path


def path(name: str) -> Path:
    """Filesystem path of a bundled resource file."""
    return Path(str(resources.files(__name__).joinpath(name)))

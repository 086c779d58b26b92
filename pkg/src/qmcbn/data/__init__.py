"""Bundled networks, evidence files, and default Sobol direction numbers."""

from importlib.resources import files


def read_text(filename: str) -> str:
    return files(__name__).joinpath(filename).read_text()


def path(filename: str) -> str:
    """Filesystem path of a bundled file (the package is installed from source)."""
    return str(files(__name__).joinpath(filename))

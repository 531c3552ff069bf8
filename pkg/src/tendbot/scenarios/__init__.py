"""Bundled scenario fixtures."""

from importlib import resources


def scenario_path(name: str) -> str:
    """Filesystem path of a bundled scenario (name without extension)."""
    ref = resources.files(__package__) / f"{name}.json"
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return str(ref)


def available() -> list:
    return sorted(
        p.name[:-5] for p in resources.files(__package__).iterdir() if p.name.endswith(".json")
    )

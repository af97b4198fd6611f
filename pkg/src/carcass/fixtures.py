"""Reference maps shipped with the package."""

from __future__ import annotations

from importlib import resources

from .rational_pl import PLMap, loads
from .unimodal import CarcassMap, validate_carcass

NAMES = ("tent", "g_A", "g_B", "h_A")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    return resources.files("carcass.data").joinpath(f"{name}.json").read_text(encoding="utf-8")


def fixture_map(name: str) -> PLMap:
    return loads(fixture_text(name))


def fixture_carcass(name: str) -> CarcassMap:
    return validate_carcass(fixture_map(name))

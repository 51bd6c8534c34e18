"""Diagram fixtures shipped with the package."""

from __future__ import annotations

from importlib import resources

from ..diagrams import Diagram, parse_diagram

NAMES = (
    "unknot",
    "kink",
    "classical_trefoil",
    "figure_eight",
    "virtual_trefoil",
    "kishino",
    "heawood7",
    "hopf",
)


def path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files(__name__).joinpath(f"{name}.gauss")


def load(name: str) -> Diagram:
    return parse_diagram(path(name).read_text(encoding="utf-8"))

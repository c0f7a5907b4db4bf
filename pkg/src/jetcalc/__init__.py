"""Exact computations with jets of singular foliations over weighted-graded rings."""

from importlib import resources

from .scenario import ParseError, Scenario, parse_expression, parse_scenario, render_expression, render_scenario

__version__ = "0.1.0"

FIXTURES = ("nodal", "nongorenstein", "free_plane", "free_plane_nu1", "free_plane_nu2")


def load_fixture(name: str) -> Scenario:
    """Parse one of the bundled scenario files by stem name."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    text = resources.files(__package__).joinpath("fixtures", f"{name}.scn").read_text()
    return parse_scenario(text)


__all__ = ["FIXTURES", "ParseError", "Scenario", "load_fixture", "parse_expression", "parse_scenario",
           "render_expression", "render_scenario", "__version__"]

"""Shared fixture-corpus loaders for the test suite."""

from functools import lru_cache
from pathlib import Path

from logaffine.fileio import (
    parse_bundle_file,
    parse_fan_file,
    parse_polytope_file,
    parse_welding_file,
)
from logaffine.polytopes import build_polytope
from logaffine.welding import build_welded_space

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@lru_cache(maxsize=None)
def load_fan(name: str):
    return parse_fan_file(fixture_path(name))


@lru_cache(maxsize=None)
def load_welding(name: str):
    return parse_welding_file(fixture_path(name))


@lru_cache(maxsize=None)
def load_space(name: str):
    return build_welded_space(load_welding(name).spec)


@lru_cache(maxsize=None)
def load_polytope(name: str):
    return parse_polytope_file(fixture_path(name))


@lru_cache(maxsize=None)
def load_bundle(name: str):
    return parse_bundle_file(fixture_path(name))


@lru_cache(maxsize=None)
def load_built_polytope(name: str):
    pf = load_polytope(name)
    return build_polytope(build_welded_space(pf.spec.welding), pf.spec)

"""Pytest configuration and shared fixtures."""

from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
from hypothesis import settings as hypothesis_settings

from entrokl.config import Settings
from entrokl.models import ExponentialSpec, GaussianSpec, UniformBoxSpec
from entrokl.services import AnalyticDensity

hypothesis_settings.register_profile("default", deadline=None, max_examples=100)
hypothesis_settings.load_profile("default")


@pytest.fixture
def settings() -> Settings:
    """Create settings with the library defaults, ignoring the environment.

    Returns:
        Settings instance with test configuration.
    """
    return Settings(threads=1, log_level="WARNING", log_format="json", send_to_logfire=False)


@pytest.fixture
def standard_normal() -> AnalyticDensity:
    """One-dimensional N(0, 1)."""
    return AnalyticDensity(GaussianSpec(mean=[0.0], cov=[[1.0]]))


@pytest.fixture
def gaussian_2d() -> AnalyticDensity:
    """Two-dimensional standard normal (isotropic, closed-form ball masses)."""
    return AnalyticDensity(GaussianSpec(mean=[0.0, 0.0], cov=[[1.0, 0.0], [0.0, 1.0]]))


@pytest.fixture
def correlated_gaussian() -> AnalyticDensity:
    """Two-dimensional correlated normal (ball masses by Monte Carlo)."""
    return AnalyticDensity(GaussianSpec(mean=[1.0, -1.0], cov=[[2.0, 0.6], [0.6, 1.0]]))


@pytest.fixture
def unit_interval() -> AnalyticDensity:
    """Uniform law on [0, 1]."""
    return AnalyticDensity(UniformBoxSpec(lower=[0.0], upper=[1.0]))


@pytest.fixture
def unit_square() -> AnalyticDensity:
    """Uniform law on [0, 1]²."""
    return AnalyticDensity(UniformBoxSpec(lower=[0.0, 0.0], upper=[1.0, 1.0]))


@pytest.fixture
def exponential() -> AnalyticDensity:
    """Exponential law with rate 1."""
    return AnalyticDensity(ExponentialSpec(rate=1.0))


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[Any, str], Path]:
    """Factory writing a JSON document into the test's temporary directory."""

    def _write(document: Any, name: str = "density.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def write_text(tmp_path: Path) -> Callable[[str, str], Path]:
    """Factory writing a text file into the test's temporary directory."""

    def _write(content: str, name: str = "points.csv") -> Path:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8", newline="")
        return path

    return _write

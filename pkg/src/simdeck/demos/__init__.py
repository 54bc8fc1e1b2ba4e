"""Bundled demo simulations, selectable by name via the CLI."""

from . import classifiers, datagen, decay, lif  # noqa: F401  (registration side effects)
from .registry import REGISTRY, create, demo_names

__all__ = ["REGISTRY", "create", "demo_names"]

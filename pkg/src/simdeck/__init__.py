"""simdeck: an interactive simulation workbench.

A headless engine hosts user-defined step simulations, exposes their
parameters and outputs as typed widgets parsed from in-source directives,
persists parameter/layout state in a single-file SQLite store, and streams
rendered frames to browser clients over a websocket protocol.
"""

from .model import (
    DEFAULT_CONTEXT,
    WidgetCollection,
    SimulationContext,
    ParameterDef,
    DataArrayDef,
    ParameterWidgetDef,
    DataWidgetDef,
    CommentWidgetDef,
    empty_collection,
    validate_collection,
    upsert_widget,
    resolve_bindings,
)
from .engine import Engine, Simulation
from .store import Store, open_store, default_db_path

__all__ = [
    "DEFAULT_CONTEXT",
    "WidgetCollection",
    "SimulationContext",
    "ParameterDef",
    "DataArrayDef",
    "ParameterWidgetDef",
    "DataWidgetDef",
    "CommentWidgetDef",
    "empty_collection",
    "validate_collection",
    "upsert_widget",
    "resolve_bindings",
    "Engine",
    "Simulation",
    "Store",
    "open_store",
    "default_db_path",
]

__version__ = "0.1.0"

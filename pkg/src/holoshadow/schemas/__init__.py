"""Shipped JSON schemas for the graph file format and CLI result objects."""

import importlib.resources
import json


def load(name: str) -> dict:
    """Load a shipped schema by name ("graph" or "result")."""
    ref = importlib.resources.files(__name__) / f"{name}.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))

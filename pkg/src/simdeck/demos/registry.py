"""Name -> simulation class registry for the CLI host."""

from __future__ import annotations

REGISTRY: dict[str, type] = {}


def register(name: str):
    def deco(cls):
        cls.demo_name = name
        REGISTRY[name] = cls
        return cls
    return deco


def demo_names() -> list[str]:
    return sorted(REGISTRY)


def create(name: str, seed: int | None = 0):
    try:
        cls = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown demo '{name}'") from None
    return cls(seed=seed)

"""Misinformation taxonomy: data-file-backed classes and distributions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable

from ..errors import ValidationError


@lru_cache(maxsize=1)
def load_taxonomy() -> dict:
    raw = resources.files("misinfo_sentinel.annotate").joinpath("data/taxonomy.json")
    return json.loads(raw.read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def taxonomy_classes() -> tuple[str, ...]:
    return tuple(load_taxonomy()["classes"].keys())


@lru_cache(maxsize=1)
def subcategory_parents() -> dict[str, str]:
    parents = {}
    for cls, spec in load_taxonomy()["classes"].items():
        for sub in spec["subcategories"]:
            parents[sub] = cls
    return parents


@dataclass(slots=True)
class TaxonomyAssignment:
    """Multi-class taxonomy coding of one misinformation post."""

    post_id: str
    classes: set[str]
    subcategories: set[str] = field(default_factory=set)

    def __post_init__(self):
        self.classes = set(self.classes)
        self.subcategories = set(self.subcategories)
        known = set(taxonomy_classes())
        bad = self.classes - known
        if bad:
            raise ValidationError(f"unknown taxonomy classes {sorted(bad)}")
        parents = subcategory_parents()
        for sub in self.subcategories:
            if sub not in parents:
                raise ValidationError(f"unknown subcategory {sub!r}")
            if parents[sub] not in self.classes:
                raise ValidationError(
                    f"subcategory {sub!r} requires class {parents[sub]!r} in the assignment"
                )


def taxonomy_distribution(assignments: Iterable[TaxonomyAssignment]) -> dict[str, int]:
    """Per-class post counts (a post increments every class it carries)."""
    counts = {cls: 0 for cls in taxonomy_classes()}
    for assignment in assignments:
        for cls in assignment.classes:
            counts[cls] += 1
    return counts


def subcategory_distribution(assignments: Iterable[TaxonomyAssignment]) -> dict[str, int]:
    counts = {sub: 0 for sub in subcategory_parents()}
    for assignment in assignments:
        for sub in assignment.subcategories:
            counts[sub] += 1
    return counts

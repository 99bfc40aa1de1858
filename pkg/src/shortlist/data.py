"""Access to the catalogs, tasks, and golden answer sets bundled with the package."""

from __future__ import annotations

import json
from importlib import resources

from .catalog import Catalog, load_catalog
from .experiment import TaskSpec, task_from_json

_DATA = resources.files("shortlist") / "data"

CATALOG_FILES = {
    "baseline-A": "catalog_a.json",
    "visualization-B": "catalog_b.json",
}


def bundled_catalog(variant_tag: str) -> Catalog:
    filename = CATALOG_FILES[variant_tag]
    with (_DATA / filename).open("rb") as f:
        return load_catalog(f)


def bundled_catalogs() -> dict[str, Catalog]:
    return {tag: bundled_catalog(tag) for tag in CATALOG_FILES}


def bundled_tasks() -> dict[str, TaskSpec]:
    with (_DATA / "tasks.json").open("r", encoding="utf-8") as f:
        obj = json.load(f)
    tasks = [task_from_json(t) for t in obj["tasks"]]
    return {t.id: t for t in tasks}


def golden_answers(task_id: str) -> dict[str, list[str]]:
    """Stored oracle output: catalog variant -> correct product ids."""
    with (_DATA / "golden" / f"{task_id}.json").open("r", encoding="utf-8") as f:
        return json.load(f)["correct"]

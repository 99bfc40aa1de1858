"""Hierarchical attribute wheel: the click-target taxonomy for filtering.

The wheel is a three-level tree under a synthetic root: attribute nodes,
their value nodes (allowed labels, or bucket labels for quantitative
attributes), and subvalue nodes from a schema-declared sub-grouping (e.g.
model lines nested under brands).  An attribute that serves as another
attribute's sub-grouping target is shown only as subvalue nodes, never as
its own top-level segment.

Selection is at exactly one granularity per path: selecting a node displaces
any selected ancestor or descendant.  Expansion state is pure UI metadata
and never affects filtering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .catalog import QUANTITATIVE, Catalog
from .errors import SchemaViolation, UnknownNode
from .filters import FilterSpec, ValueSet

ROOT = "root"
NODE_ATTRIBUTE = "attribute"
NODE_VALUE = "value"
NODE_SUBVALUE = "subvalue"

ROOT_ID = "root"


@dataclass(frozen=True)
class WheelNode:
    id: str
    label: str
    node_kind: str
    attr_id: str
    children: tuple["WheelNode", ...] = ()

    def walk(self) -> Iterator["WheelNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class WheelState:
    expanded: frozenset[str] = frozenset()
    selected: frozenset[str] = frozenset()

    def __init__(self, expanded=(), selected=()):
        object.__setattr__(self, "expanded", frozenset(expanded))
        object.__setattr__(self, "selected", frozenset(selected))


class WheelIndex:
    """Parent/ancestor lookups for a built wheel tree."""

    def __init__(self, root: WheelNode):
        self.root = root
        self.nodes: dict[str, WheelNode] = {}
        self.parent: dict[str, str | None] = {}
        for node in root.walk():
            if node.id in self.nodes:
                raise SchemaViolation(f"duplicate wheel node id {node.id!r}")
            self.nodes[node.id] = node
        self.parent[root.id] = None
        for node in root.walk():
            for child in node.children:
                self.parent[child.id] = node.id

    def get(self, node_id: str) -> WheelNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"unknown wheel node {node_id!r}", node=node_id) from None

    def ancestors(self, node_id: str) -> list[WheelNode]:
        """Path from the node's parent up to (excluding) the root."""
        out = []
        cur = self.parent[node_id]
        while cur is not None and cur != self.root.id:
            out.append(self.nodes[cur])
            cur = self.parent[cur]
        return out

    def descendants(self, node_id: str) -> list[WheelNode]:
        node = self.get(node_id)
        return [n for n in node.walk() if n.id != node.id]


def build_wheel(catalog: Catalog) -> WheelNode:
    """Build the wheel tree for a catalog's schema.

    Categorical/ordinal attributes contribute value nodes from allowed_values
    and subvalue nodes from their sub-grouping; quantitative attributes
    contribute their declared bucket labels as value nodes.
    """
    nested = {a.subattribute for a in catalog.schema if a.subattribute is not None}
    attr_nodes = []
    for attr in catalog.schema:
        if attr.id in nested:
            continue
        values = []
        if attr.kind == QUANTITATIVE:
            labels = attr.bucket_labels()
        else:
            labels = attr.allowed_values
        for label in labels:
            sub_nodes = ()
            if attr.subgroups is not None:
                sub_attr = attr.subattribute
                sub_nodes = tuple(
                    WheelNode(
                        id=f"{attr.id}:{label}:{sublabel}",
                        label=sublabel,
                        node_kind=NODE_SUBVALUE,
                        attr_id=sub_attr,
                    )
                    for sublabel in attr.subgroups.get(label, ())
                )
            values.append(
                WheelNode(
                    id=f"{attr.id}:{label}",
                    label=label,
                    node_kind=NODE_VALUE,
                    attr_id=attr.id,
                    children=sub_nodes,
                )
            )
        attr_nodes.append(
            WheelNode(
                id=attr.id,
                label=attr.display_name,
                node_kind=NODE_ATTRIBUTE,
                attr_id=attr.id,
                children=tuple(values),
            )
        )
    return WheelNode(id=ROOT_ID, label="All attributes", node_kind=ROOT, attr_id="", children=tuple(attr_nodes))


def toggle_select(index: WheelIndex, state: WheelState, node_id: str) -> WheelState:
    """Flip a node's selection, displacing selected ancestors/descendants."""
    node = index.get(node_id)
    if node.id == index.root.id:
        raise SchemaViolation("the wheel root is not selectable")
    selected = set(state.selected)
    if node_id in selected:
        selected.remove(node_id)
    else:
        for anc in index.ancestors(node_id):
            selected.discard(anc.id)
        for desc in index.descendants(node_id):
            selected.discard(desc.id)
        selected.add(node_id)
    return WheelState(expanded=state.expanded, selected=selected)


def toggle_expand(index: WheelIndex, state: WheelState, node_id: str) -> WheelState:
    index.get(node_id)
    expanded = set(state.expanded)
    if node_id in expanded:
        expanded.remove(node_id)
    else:
        expanded.add(node_id)
    return WheelState(expanded=expanded, selected=state.selected)


def validate_selection(index: WheelIndex, node_ids) -> frozenset[str]:
    """Check a posted selection list: all nodes exist, one granularity per path."""
    ids = frozenset(node_ids)
    for node_id in ids:
        node = index.get(node_id)
        if node.id == index.root.id:
            raise SchemaViolation("the wheel root is not selectable")
        for anc in index.ancestors(node_id):
            if anc.id in ids:
                raise SchemaViolation(
                    f"nodes {node_id!r} and ancestor {anc.id!r} selected together",
                    node=node_id,
                    ancestor=anc.id,
                )
    return ids


def selected_filter_spec(index: WheelIndex, state: WheelState) -> FilterSpec:
    """Translate the selection into a filter.

    Each selected value/subvalue node contributes its own label; a selected
    subvalue also pins every value-node ancestor (picking a brand's model
    line implies that brand).  Labels group per attribute into a disjunction;
    attributes conjoin.  Attribute-node selections mark interest only and
    contribute no clause.
    """
    atoms: dict[str, set[str]] = {}
    for node_id in state.selected:
        node = index.get(node_id)
        if node.node_kind == NODE_ATTRIBUTE:
            continue
        atoms.setdefault(node.attr_id, set()).add(node.label)
        for anc in index.ancestors(node_id):
            if anc.node_kind == NODE_VALUE:
                atoms.setdefault(anc.attr_id, set()).add(anc.label)
    return FilterSpec({attr_id: ValueSet(labels) for attr_id, labels in atoms.items()})


def selected_attribute_ids(index: WheelIndex, state: WheelState) -> list[str]:
    """Attributes the selection touches, in wheel (schema) order."""
    touched: list[str] = []

    def touch(attr_id: str) -> None:
        if attr_id and attr_id not in touched:
            touched.append(attr_id)

    for node in index.root.walk():
        if node.id not in state.selected:
            continue
        for anc in reversed(index.ancestors(node.id)):
            if anc.node_kind == NODE_VALUE:
                touch(anc.attr_id)
        touch(node.attr_id)
    return touched


def wheel_to_json(node: WheelNode) -> dict:
    return {
        "id": node.id,
        "label": node.label,
        "node_kind": node.node_kind,
        "attr_id": node.attr_id,
        "children": [wheel_to_json(c) for c in node.children],
    }


def state_to_json(state: WheelState) -> dict:
    return {"expanded": sorted(state.expanded), "selected": sorted(state.selected)}


def state_from_json(obj: dict) -> WheelState:
    return WheelState(expanded=obj.get("expanded", ()), selected=obj.get("selected", ()))

"""Conjunctive attribute filters over a catalog.

A FilterSpec holds at most one clause per attribute; a product matches when
it satisfies every clause.  Clauses are either a ValueSet (disjunction of
labels; on a quantitative attribute the labels name schema buckets) or a
NumericRange with individually inclusive/exclusive bounds.  Products missing
a constrained attribute never match.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

from .catalog import QUANTITATIVE, AttributeDef, Catalog, Product
from .errors import NonComparableAttribute, SchemaViolation, UnknownLabel


@dataclass(frozen=True)
class ValueSet:
    labels: frozenset[str]

    def __init__(self, labels):
        object.__setattr__(self, "labels", frozenset(labels))
        if not self.labels:
            raise SchemaViolation("ValueSet must be non-empty")


@dataclass(frozen=True)
class NumericRange:
    lo: float = -math.inf
    hi: float = math.inf
    lo_inclusive: bool = True
    hi_inclusive: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise SchemaViolation("NumericRange bounds must not be NaN")
        if self.lo > self.hi:
            raise SchemaViolation(f"NumericRange lo {self.lo} > hi {self.hi}")

    def contains(self, value: float) -> bool:
        if value < self.lo or (value == self.lo and not self.lo_inclusive):
            return False
        if value > self.hi or (value == self.hi and not self.hi_inclusive):
            return False
        return True


Clause = Union[ValueSet, NumericRange]


@dataclass(frozen=True)
class FilterSpec:
    clauses: Mapping[str, Clause] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "clauses", dict(self.clauses))

    @property
    def is_empty(self) -> bool:
        return not self.clauses

    def with_clause(self, attr_id: str, clause: Clause) -> "FilterSpec":
        merged = dict(self.clauses)
        merged[attr_id] = clause
        return FilterSpec(merged)

    def __eq__(self, other):
        return isinstance(other, FilterSpec) and self.clauses == other.clauses


def _validate_clause(attr: AttributeDef, clause: Clause) -> None:
    if isinstance(clause, ValueSet):
        allowed = set(attr.allowed_values or ()) | set(attr.bucket_labels())
        unknown = clause.labels - allowed
        if unknown:
            raise UnknownLabel(
                f"labels {sorted(unknown)} not valid for attribute {attr.id!r}",
                attribute=attr.id,
                labels=sorted(unknown),
            )
    else:
        if attr.kind != QUANTITATIVE:
            raise NonComparableAttribute(
                f"numeric range clause on non-quantitative attribute {attr.id!r}", attribute=attr.id
            )


def _matches(attr: AttributeDef, clause: Clause, product: Product) -> bool:
    if not product.carries(attr.id):
        return False
    value = product.values[attr.id]
    if isinstance(clause, ValueSet):
        if attr.kind == QUANTITATIVE:
            # bucket disjunction: the numeric value must fall in a named bucket
            return any(b.contains(value) for b in attr.buckets or () if b.label in clause.labels)
        return value in clause.labels
    return clause.contains(value)


def apply_filter(catalog: Catalog, spec: FilterSpec) -> list[str]:
    """Product ids satisfying every clause, in catalog order.

    Raises UnknownAttribute / UnknownLabel / NonComparableAttribute when the
    spec does not fit the schema.  Empty spec matches everything.
    """
    resolved = [(catalog.attribute(attr_id), clause) for attr_id, clause in spec.clauses.items()]
    for attr, clause in resolved:
        _validate_clause(attr, clause)
    return [p.id for p in catalog.products if all(_matches(attr, clause, p) for attr, clause in resolved)]


# -- JSON format --------------------------------------------------------------
#
# {"clauses": {attr: {"labels": [..]}                          # ValueSet
#              | {"lo": n|null, "hi": n|null,
#                 "lo_inclusive": bool, "hi_inclusive": bool}}}  # NumericRange
#
# A null / missing bound means unbounded on that side.

def clause_from_json(obj: dict) -> Clause:
    if "labels" in obj:
        return ValueSet(obj["labels"])
    lo = obj.get("lo")
    hi = obj.get("hi")
    return NumericRange(
        lo=-math.inf if lo is None else float(lo),
        hi=math.inf if hi is None else float(hi),
        lo_inclusive=bool(obj.get("lo_inclusive", True)),
        hi_inclusive=bool(obj.get("hi_inclusive", True)),
    )


def clause_to_json(clause: Clause) -> dict:
    if isinstance(clause, ValueSet):
        return {"labels": sorted(clause.labels)}
    return {
        "lo": None if math.isinf(clause.lo) and clause.lo < 0 else clause.lo,
        "hi": None if math.isinf(clause.hi) and clause.hi > 0 else clause.hi,
        "lo_inclusive": clause.lo_inclusive,
        "hi_inclusive": clause.hi_inclusive,
    }


def spec_from_json(obj: dict) -> FilterSpec:
    clauses = obj.get("clauses", obj)  # tolerate a bare clause map
    return FilterSpec({attr: clause_from_json(c) for attr, c in clauses.items()})


def spec_to_json(spec: FilterSpec) -> dict:
    return {"clauses": {attr: clause_to_json(c) for attr, c in spec.clauses.items()}}

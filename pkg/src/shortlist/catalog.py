"""Product catalog: attribute schema, products, loading, and validation.

A catalog is a single product type (e.g. smartphones) described by a fixed
attribute schema.  Attributes are quantitative (numbers with a unit),
ordinal (ordered labels), or categorical (unordered labels).  Products may
carry a sparse subset of the schema; any downstream constraint on an
attribute a product does not carry excludes that product.

Catalogs are immutable after load and safe for concurrent readers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Mapping, Union

from .errors import MalformedInput, NoData, SchemaViolation, UnknownAttribute, UnknownProduct

QUANTITATIVE = "quantitative"
ORDINAL = "ordinal"
CATEGORICAL = "categorical"
KINDS = (QUANTITATIVE, ORDINAL, CATEGORICAL)

HIGHER_BETTER = "higher_better"
LOWER_BETTER = "lower_better"
NEUTRAL = "neutral"
DIRECTIONS = (HIGHER_BETTER, LOWER_BETTER, NEUTRAL)

#: attribute kinds that can be plotted / ranked (categorical cannot)
COMPARABLE_KINDS = (QUANTITATIVE, ORDINAL)


@dataclass(frozen=True)
class Bucket:
    """Named numeric segment used as a click target for a quantitative attribute.

    Matches values with ``lo <= v < hi``; ``hi=None`` means unbounded above.
    """

    label: str
    lo: float
    hi: float | None = None

    def contains(self, value: float) -> bool:
        if value < self.lo:
            return False
        return self.hi is None or value < self.hi


@dataclass(frozen=True)
class AttributeDef:
    id: str
    display_name: str
    kind: str
    unit: str | None = None
    allowed_values: tuple[str, ...] | None = None
    direction: str = NEUTRAL
    # quantitative only: wheel segments (optional)
    buckets: tuple[Bucket, ...] | None = None
    # categorical only: the attribute whose labels nest under this one's values
    # (e.g. model lines under brands), plus the per-value grouping
    subattribute: str | None = None
    subgroups: Mapping[str, tuple[str, ...]] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaViolation(f"attribute {self.id!r}: unknown kind {self.kind!r}", attribute=self.id)
        if self.direction not in DIRECTIONS:
            raise SchemaViolation(f"attribute {self.id!r}: unknown direction {self.direction!r}", attribute=self.id)
        if self.kind == QUANTITATIVE:
            if self.allowed_values is not None:
                raise SchemaViolation(
                    f"attribute {self.id!r}: quantitative attributes take no allowed_values", attribute=self.id
                )
        else:
            if not self.allowed_values:
                raise SchemaViolation(
                    f"attribute {self.id!r}: {self.kind} attributes require non-empty allowed_values",
                    attribute=self.id,
                )
            if len(set(self.allowed_values)) != len(self.allowed_values):
                raise SchemaViolation(f"attribute {self.id!r}: duplicate allowed_values", attribute=self.id)
            if self.buckets is not None:
                raise SchemaViolation(f"attribute {self.id!r}: buckets only apply to quantitative", attribute=self.id)
        if self.buckets is not None:
            labels = [b.label for b in self.buckets]
            if len(set(labels)) != len(labels):
                raise SchemaViolation(f"attribute {self.id!r}: duplicate bucket labels", attribute=self.id)
            for b in self.buckets:
                if b.hi is not None and b.lo > b.hi:
                    raise SchemaViolation(
                        f"attribute {self.id!r}: bucket {b.label!r} has lo > hi", attribute=self.id
                    )
        if (self.subattribute is None) != (self.subgroups is None):
            raise SchemaViolation(
                f"attribute {self.id!r}: subattribute and subgroups must be declared together", attribute=self.id
            )
        if self.subattribute is not None and self.kind != CATEGORICAL:
            raise SchemaViolation(
                f"attribute {self.id!r}: sub-groupings only apply to categorical attributes", attribute=self.id
            )

    @property
    def is_comparable(self) -> bool:
        return self.kind in COMPARABLE_KINDS

    def label_index(self, label: str) -> int:
        """Position of an ordinal/categorical label in the declared order."""
        return self.allowed_values.index(label)

    def bucket_labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.buckets) if self.buckets else ()


@dataclass(frozen=True)
class Product:
    id: str
    name: str
    values: Mapping[str, Union[float, str]]
    image_refs: tuple[str, ...] = ()

    def carries(self, attr_id: str) -> bool:
        return attr_id in self.values


@dataclass(frozen=True)
class Catalog:
    variant_tag: str
    schema: tuple[AttributeDef, ...]
    products: tuple[Product, ...]
    _by_attr: dict = field(default_factory=dict, repr=False, compare=False)
    _by_product: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._by_attr.update({a.id: a for a in self.schema})
        self._by_product.update({p.id: p for p in self.products})
        _validate(self)

    def attribute(self, attr_id: str) -> AttributeDef:
        try:
            return self._by_attr[attr_id]
        except KeyError:
            raise UnknownAttribute(f"unknown attribute {attr_id!r}", attribute=attr_id) from None

    def product(self, product_id: str) -> Product:
        try:
            return self._by_product[product_id]
        except KeyError:
            raise UnknownProduct(f"unknown product {product_id!r}", product=product_id) from None

    def has_product(self, product_id: str) -> bool:
        return product_id in self._by_product

    @property
    def product_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.products)

    def comparable_attribute_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.schema if a.is_comparable)


def _validate(catalog: Catalog) -> None:
    if not catalog.variant_tag:
        raise SchemaViolation("variant_tag must be non-empty")
    ids = [a.id for a in catalog.schema]
    if len(set(ids)) != len(ids):
        raise SchemaViolation("duplicate attribute ids in schema")
    by_attr = catalog._by_attr
    for attr in catalog.schema:
        if attr.subattribute is not None:
            sub = by_attr.get(attr.subattribute)
            if sub is None:
                raise SchemaViolation(
                    f"attribute {attr.id!r}: subattribute {attr.subattribute!r} not in schema", attribute=attr.id
                )
            if sub.kind == QUANTITATIVE:
                raise SchemaViolation(
                    f"attribute {attr.id!r}: subattribute {sub.id!r} must carry labels", attribute=attr.id
                )
            seen: set[str] = set()
            for value, subvalues in attr.subgroups.items():
                if value not in attr.allowed_values:
                    raise SchemaViolation(
                        f"attribute {attr.id!r}: subgroup key {value!r} not an allowed value", attribute=attr.id
                    )
                for sv in subvalues:
                    if sv not in sub.allowed_values:
                        raise SchemaViolation(
                            f"attribute {attr.id!r}: subgroup label {sv!r} not allowed for {sub.id!r}",
                            attribute=attr.id,
                        )
                    if sv in seen:
                        raise SchemaViolation(
                            f"attribute {attr.id!r}: subgroup label {sv!r} nested under two values",
                            attribute=attr.id,
                        )
                    seen.add(sv)

    pids = [p.id for p in catalog.products]
    if len(set(pids)) != len(pids):
        raise SchemaViolation("duplicate product ids in catalog")
    for product in catalog.products:
        for attr_id, value in product.values.items():
            attr = by_attr.get(attr_id)
            if attr is None:
                raise SchemaViolation(
                    f"product {product.id!r}: unknown attribute {attr_id!r}",
                    product=product.id,
                    attribute=attr_id,
                )
            if attr.kind == QUANTITATIVE:
                if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                    raise SchemaViolation(
                        f"product {product.id!r}: attribute {attr_id!r} needs a finite number, got {value!r}",
                        product=product.id,
                        attribute=attr_id,
                    )
            else:
                if not isinstance(value, str) or value not in attr.allowed_values:
                    raise SchemaViolation(
                        f"product {product.id!r}: attribute {attr_id!r} label {value!r} not allowed",
                        product=product.id,
                        attribute=attr_id,
                    )


# -- JSON format --------------------------------------------------------------
#
# {"variant_tag": str,
#  "schema": [{"id", "display_name", "kind", "unit", "allowed_values",
#              "direction", "buckets": [{"label", "lo", "hi"}],
#              "subattribute", "subgroups": {value: [labels]}}],
#  "products": [{"id", "name", "image_refs": [paths], "values": {attr: value}}]}
#
# Optional schema fields may be omitted or null.  Product order in the file is
# the canonical tie-break order everywhere downstream.

def attribute_from_json(obj: dict) -> AttributeDef:
    buckets = obj.get("buckets")
    subgroups = obj.get("subgroups")
    return AttributeDef(
        id=obj["id"],
        display_name=obj["display_name"],
        kind=obj["kind"],
        unit=obj.get("unit"),
        allowed_values=tuple(obj["allowed_values"]) if obj.get("allowed_values") is not None else None,
        direction=obj.get("direction", NEUTRAL),
        buckets=tuple(Bucket(b["label"], b["lo"], b.get("hi")) for b in buckets) if buckets else None,
        subattribute=obj.get("subattribute"),
        subgroups={k: tuple(v) for k, v in subgroups.items()} if subgroups else None,
    )


def attribute_to_json(attr: AttributeDef) -> dict:
    obj: dict[str, Any] = {
        "id": attr.id,
        "display_name": attr.display_name,
        "kind": attr.kind,
        "unit": attr.unit,
        "direction": attr.direction,
    }
    if attr.allowed_values is not None:
        obj["allowed_values"] = list(attr.allowed_values)
    if attr.buckets is not None:
        obj["buckets"] = [{"label": b.label, "lo": b.lo, "hi": b.hi} for b in attr.buckets]
    if attr.subattribute is not None:
        obj["subattribute"] = attr.subattribute
        obj["subgroups"] = {k: list(v) for k, v in attr.subgroups.items()}
    return obj


def _product_from_json(obj: dict) -> Product:
    return Product(
        id=obj["id"],
        name=obj["name"],
        values=dict(obj["values"]),
        image_refs=tuple(obj.get("image_refs", ())),
    )


def _product_to_json(product: Product) -> dict:
    return {
        "id": product.id,
        "name": product.name,
        "image_refs": list(product.image_refs),
        "values": dict(product.values),
    }


def catalog_from_json(obj: dict) -> Catalog:
    """Build and validate a Catalog from a parsed JSON object."""
    try:
        schema = tuple(attribute_from_json(a) for a in obj["schema"])
        products = tuple(_product_from_json(p) for p in obj["products"])
        variant_tag = obj["variant_tag"]
    except SchemaViolation:
        raise
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"catalog JSON missing or malformed field: {exc}") from exc
    if not isinstance(variant_tag, str):
        raise MalformedInput("variant_tag must be a string")
    return Catalog(variant_tag=variant_tag, schema=schema, products=products)


def catalog_to_json(catalog: Catalog) -> dict:
    return {
        "variant_tag": catalog.variant_tag,
        "schema": [attribute_to_json(a) for a in catalog.schema],
        "products": [_product_to_json(p) for p in catalog.products],
    }


def load_catalog(source: Union[str, Path, IO[bytes], IO[str]]) -> Catalog:
    """Load a catalog from a JSON file path or an open stream.

    Either returns a fully validated Catalog or raises MalformedInput /
    SchemaViolation; no partial catalogs escape.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            raw = f.read()
    else:
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"unparseable catalog JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedInput("catalog JSON must be an object")
    return catalog_from_json(obj)


def save_catalog(catalog: Catalog, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(catalog_to_json(catalog), f, indent=2)
        f.write("\n")


def attribute_range(catalog: Catalog, attr_id: str):
    """Value range of an attribute over the catalog.

    Quantitative: exact (min, max) over products carrying the value; raises
    NoData when no product carries it.  Ordinal/categorical: the schema's
    allowed_values order.
    """
    attr = catalog.attribute(attr_id)
    if attr.kind != QUANTITATIVE:
        return attr.allowed_values
    values = [p.values[attr_id] for p in catalog.products if p.carries(attr_id)]
    if not values:
        raise NoData(f"no product carries quantitative attribute {attr_id!r}", attribute=attr_id)
    return (min(values), max(values))

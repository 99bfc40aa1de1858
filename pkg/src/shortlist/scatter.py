"""Scatter projections over two attributes plus dominance highlighting.

Only quantitative and ordinal attributes can be projected; ordinal labels
map to their 0-based position in the declared order.  The preferred corner
is derived from the two axes' direction metadata.  Dominance analysis marks
the Pareto-maximal products among the projected set; it is advisory
highlighting only and never filters anything out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .catalog import LOWER_BETTER, QUANTITATIVE, AttributeDef, Catalog
from .errors import EmptyAttrs, NonComparableAttribute, SameAttribute


@dataclass(frozen=True)
class ScatterPoint:
    product_id: str
    x: float
    y: float
    in_bucket: bool = False


@dataclass(frozen=True)
class ScatterProjection:
    x_attr: str
    y_attr: str
    points: tuple[ScatterPoint, ...]
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    preferred_corner: str


def _require_comparable(attr: AttributeDef) -> None:
    if not attr.is_comparable:
        raise NonComparableAttribute(
            f"attribute {attr.id!r} is categorical and cannot be plotted or ranked", attribute=attr.id
        )


def _coordinate(attr: AttributeDef, value) -> float:
    if attr.kind == QUANTITATIVE:
        return float(value)
    return float(attr.label_index(value))


def scatter_projection(
    catalog: Catalog,
    filtered_ids: Sequence[str],
    x_attr: str,
    y_attr: str,
    bucket: Iterable[str] = (),
) -> ScatterProjection:
    """Project the filtered products onto two comparable attributes.

    One point per product carrying both attributes.  Ranges are exact bounds
    over the emitted points ((0, 0) when no point qualifies).
    """
    if x_attr == y_attr:
        raise SameAttribute(f"x and y axes must differ, got {x_attr!r} twice", attribute=x_attr)
    ax = catalog.attribute(x_attr)
    ay = catalog.attribute(y_attr)
    _require_comparable(ax)
    _require_comparable(ay)

    bucket_set = set(bucket)
    points = []
    for pid in filtered_ids:
        product = catalog.product(pid)
        if not (product.carries(x_attr) and product.carries(y_attr)):
            continue
        points.append(
            ScatterPoint(
                product_id=pid,
                x=_coordinate(ax, product.values[x_attr]),
                y=_coordinate(ay, product.values[y_attr]),
                in_bucket=pid in bucket_set,
            )
        )

    if points:
        xs = [p.x for p in points]
        ys = [p.y for p in points]
        x_range = (min(xs), max(xs))
        y_range = (min(ys), max(ys))
    else:
        x_range = (0.0, 0.0)
        y_range = (0.0, 0.0)

    horiz = "left" if ax.direction == LOWER_BETTER else "right"
    vert = "bottom" if ay.direction == LOWER_BETTER else "top"
    return ScatterProjection(
        x_attr=x_attr,
        y_attr=y_attr,
        points=tuple(points),
        x_range=x_range,
        y_range=y_range,
        preferred_corner=f"{vert}_{horiz}",
    )


def _goodness_rows(catalog: Catalog, filtered_ids: Sequence[str], attrs: Sequence[str]):
    """(product_id, normalized vector) for products carrying every attribute.

    Normalization flips lower-is-better values so larger is always better.
    """
    defs = [catalog.attribute(a) for a in attrs]
    for attr in defs:
        _require_comparable(attr)
    rows = []
    for pid in filtered_ids:
        product = catalog.product(pid)
        if not all(product.carries(a.id) for a in defs):
            continue
        vec = tuple(
            -_coordinate(a, product.values[a.id]) if a.direction == LOWER_BETTER else _coordinate(a, product.values[a.id])
            for a in defs
        )
        rows.append((pid, vec))
    return rows


def _dominates(a: tuple, b: tuple) -> bool:
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def dominant_set(catalog: Catalog, filtered_ids: Sequence[str], attrs: Sequence[str]) -> set[str]:
    """Pareto-maximal products over the given attributes.

    A product is excluded iff some other product is at least as good on
    every attribute and strictly better on one (directions normalized).
    Products missing any of the attributes are out of consideration.

    Uses a sort-filter sweep: after sorting by coordinate sum (descending),
    a product can only be dominated by one appearing earlier, so each row is
    checked against the kept front only.
    """
    if not attrs:
        raise EmptyAttrs("dominance needs at least one attribute")
    rows = _goodness_rows(catalog, filtered_ids, attrs)
    order = {pid: i for i, pid in enumerate(pid for pid, _ in rows)}
    rows.sort(key=lambda row: (-sum(row[1]), order[row[0]]))

    front: list[tuple[str, tuple]] = []
    for pid, vec in rows:
        if not any(_dominates(kept_vec, vec) for _, kept_vec in front):
            front.append((pid, vec))
    return {pid for pid, _ in front}

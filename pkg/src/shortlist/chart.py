"""Final-stage comparison chart: per-attribute rectangles with rank arrows.

For every compared attribute each shortlisted product gets a rectangle whose
height is proportional to its value: height = value / max over the shortlist,
so the best value always reaches full height and larger always means greater
raw value (for price too: the chart encodes magnitude, not desirability).
Ordinal labels map to 1-based positions so the lowest label keeps a visible
nonzero height.  Should a quantitative attribute carry non-positive values,
all values shift up uniformly until the minimum sits at 1; order is
unaffected.  An ascending permutation per attribute drives the rank arrows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .catalog import QUANTITATIVE, AttributeDef, Catalog
from .errors import EmptyBucket, MissingValue, NonComparableAttribute

#: product colors indexed by bucket insertion order (Okabe-Ito plus extras,
#: chosen for pairwise distinguishability)
COLOR_PALETTE = (
    "#E69F00",  # orange
    "#56B4E9",  # sky blue
    "#009E73",  # green
    "#CC79A7",  # magenta
    "#0072B2",  # deep blue
    "#D55E00",  # vermilion
    "#F0E442",  # yellow
    "#7F7F7F",  # gray
)


@dataclass(frozen=True)
class ChartCell:
    raw_value: Union[float, str]
    height: float
    rank: int


@dataclass(frozen=True)
class ComparisonChart:
    products: tuple[tuple[str, int], ...]  # (product_id, color_index) in bucket order
    attributes: tuple[str, ...]
    cells: Mapping[tuple[str, str], ChartCell]  # (attr_id, product_id) -> cell
    ascending_order: Mapping[str, tuple[str, ...]]

    def cell(self, attr_id: str, product_id: str) -> ChartCell:
        return self.cells[(attr_id, product_id)]

    def color(self, product_id: str) -> str:
        for pid, idx in self.products:
            if pid == product_id:
                return COLOR_PALETTE[idx % len(COLOR_PALETTE)]
        raise KeyError(product_id)


def _mapped_value(attr: AttributeDef, value) -> float:
    if attr.kind == QUANTITATIVE:
        return float(value)
    return float(attr.label_index(value) + 1)


def build_chart(catalog: Catalog, bucket: Sequence[str], attrs: Sequence[str]) -> ComparisonChart:
    """Chart for a non-empty shortlist over comparable attributes.

    Every bucket product must carry every charted attribute; ties in value
    give equal heights and tied ranks, and the ascending permutation breaks
    ties by bucket position.
    """
    if not bucket:
        raise EmptyBucket("comparison chart needs a non-empty shortlist")
    defs = [catalog.attribute(a) for a in attrs]
    for attr in defs:
        if not attr.is_comparable:
            raise NonComparableAttribute(
                f"attribute {attr.id!r} is categorical and cannot be charted", attribute=attr.id
            )
    products = [catalog.product(pid) for pid in bucket]
    for attr in defs:
        for product in products:
            if not product.carries(attr.id):
                raise MissingValue(
                    f"product {product.id!r} carries no value for {attr.id!r}",
                    product=product.id,
                    attribute=attr.id,
                )

    cells: dict[tuple[str, str], ChartCell] = {}
    ascending: dict[str, tuple[str, ...]] = {}
    for attr in defs:
        mapped = {p.id: _mapped_value(attr, p.values[attr.id]) for p in products}
        low = min(mapped.values())
        if low <= 0:
            shift = 1.0 - low
            mapped = {pid: v + shift for pid, v in mapped.items()}
        top = max(mapped.values())
        order = sorted(bucket, key=lambda pid: (mapped[pid], bucket.index(pid)))
        ascending[attr.id] = tuple(order)
        for p in products:
            rank = 1 + sum(1 for q in products if mapped[q.id] < mapped[p.id])
            cells[(attr.id, p.id)] = ChartCell(
                raw_value=p.values[attr.id],
                height=mapped[p.id] / top,
                rank=rank,
            )

    return ComparisonChart(
        products=tuple((pid, i) for i, pid in enumerate(bucket)),
        attributes=tuple(attrs),
        cells=cells,
        ascending_order=ascending,
    )


def chart_to_json(chart: ComparisonChart) -> dict:
    return {
        "products": [
            {"product_id": pid, "color_index": idx, "color": COLOR_PALETTE[idx % len(COLOR_PALETTE)]}
            for pid, idx in chart.products
        ],
        "attributes": list(chart.attributes),
        "cells": {
            attr_id: {
                pid: {
                    "raw_value": chart.cells[(attr_id, pid)].raw_value,
                    "height": chart.cells[(attr_id, pid)].height,
                    "rank": chart.cells[(attr_id, pid)].rank,
                }
                for pid, _ in chart.products
            }
            for attr_id in chart.attributes
        },
        "ascending_order": {attr_id: list(order) for attr_id, order in chart.ascending_order.items()},
    }

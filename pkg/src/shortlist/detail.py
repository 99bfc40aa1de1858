"""Detail record shown when a scatter point is opened.

Pure read: assembling a detail view never touches session state, so closing
the overlay returns to an unchanged comparative view.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import QUANTITATIVE, AttributeDef, Catalog, Product


@dataclass(frozen=True)
class ProductDetail:
    product: Product
    spec_rows: tuple[tuple[str, str], ...]
    image_refs: tuple[str, ...]


def format_value(attr: AttributeDef, value) -> str:
    """Quantitative values render as "value unit"; labels render raw."""
    if attr.kind != QUANTITATIVE:
        return str(value)
    text = f"{value:g}"
    return f"{text} {attr.unit}" if attr.unit else text


def product_detail(catalog: Catalog, product_id: str) -> ProductDetail:
    """Formatted spec rows for every attribute the product carries, in schema order."""
    product = catalog.product(product_id)
    rows = tuple(
        (attr.display_name, format_value(attr, product.values[attr.id]))
        for attr in catalog.schema
        if product.carries(attr.id)
    )
    return ProductDetail(product=product, spec_rows=rows, image_refs=product.image_refs)


def detail_to_json(detail: ProductDetail) -> dict:
    return {
        "id": detail.product.id,
        "name": detail.product.name,
        "spec_rows": [{"attribute": name, "value": value} for name, value in detail.spec_rows],
        "image_refs": list(detail.image_refs),
    }

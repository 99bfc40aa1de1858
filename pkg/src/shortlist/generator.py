"""Deterministic smartphone catalog generator.

Same (seed, count, variant) always yields the same catalog.  Product names
embed a per-variant letter so catalogs generated for different variants never
share a product name, and prices are globally distinct within a catalog so
any cheapest/priciest query has a unique winner.
"""

from __future__ import annotations

import random

from .catalog import (
    CATEGORICAL,
    HIGHER_BETTER,
    LOWER_BETTER,
    NEUTRAL,
    ORDINAL,
    QUANTITATIVE,
    AttributeDef,
    Bucket,
    Catalog,
    Product,
)

BRAND_LINES = {
    "Samsung": ("Grand", "Edge", "Note", "Galaxy S", "Galaxy A"),
    "Apple": ("iPhone SE", "iPhone", "iPhone Pro"),
    "Huawei": ("P Series", "Mate", "Nova"),
    "Xiaomi": ("Redmi", "Mi", "Poco"),
    "Oppo": ("Reno", "Find"),
    "Nokia": ("G Series", "X Series"),
}

BRANDS = tuple(BRAND_LINES)
BRAND_WEIGHTS = (25, 18, 15, 16, 14, 12)

RAM_GB = (2, 3, 4, 6, 8, 12)
RAM_WEIGHTS = (8, 15, 30, 27, 15, 5)

CAMERA_MP = (8, 12, 16, 20, 25, 32, 48, 64)
CAMERA_WEIGHTS = (8, 14, 18, 18, 16, 12, 9, 5)

STORAGE_GB = (32, 64, 128, 256, 512)
STORAGE_WEIGHTS = (12, 28, 32, 20, 8)

# price anchor per brand, nudged by line position; noise keeps it realistic
BRAND_PRICE_BASE = {
    "Samsung": 420,
    "Apple": 700,
    "Huawei": 380,
    "Xiaomi": 260,
    "Oppo": 300,
    "Nokia": 180,
}

SPARSE_ATTRS = ("screen_size", "storage", "sim_type")
SPARSE_DROP_RATE = 0.04


def smartphone_schema() -> tuple[AttributeDef, ...]:
    """The fixed ten-attribute smartphone schema shared by all variants."""
    all_lines = tuple(line for lines in BRAND_LINES.values() for line in lines)
    return (
        AttributeDef(
            id="brand",
            display_name="Brand",
            kind=CATEGORICAL,
            allowed_values=BRANDS,
            direction=NEUTRAL,
            subattribute="model_line",
            subgroups={brand: lines for brand, lines in BRAND_LINES.items()},
        ),
        AttributeDef(
            id="model_line",
            display_name="Model line",
            kind=CATEGORICAL,
            allowed_values=all_lines,
            direction=NEUTRAL,
        ),
        AttributeDef(
            id="os",
            display_name="Operating system",
            kind=CATEGORICAL,
            allowed_values=("Android", "iOS"),
            direction=NEUTRAL,
        ),
        AttributeDef(
            id="ram",
            display_name="RAM",
            kind=QUANTITATIVE,
            unit="GB",
            direction=HIGHER_BETTER,
            buckets=(
                Bucket("2GB", 2, 3),
                Bucket("3GB", 3, 4),
                Bucket("4GB", 4, 6),
                Bucket("6GB", 6, 8),
                Bucket("8GB", 8, 12),
                Bucket("12GB", 12, None),
            ),
        ),
        AttributeDef(
            id="camera",
            display_name="Camera",
            kind=QUANTITATIVE,
            unit="MP",
            direction=HIGHER_BETTER,
            buckets=(
                Bucket("8-12MP", 0, 16),
                Bucket("16-20MP", 16, 25),
                Bucket("25-32MP", 25, 48),
                Bucket("48MP+", 48, None),
            ),
        ),
        AttributeDef(
            id="battery",
            display_name="Battery capacity",
            kind=QUANTITATIVE,
            unit="mAh",
            direction=HIGHER_BETTER,
            buckets=(
                Bucket("<2000mAh", 0, 2000),
                Bucket("2000-3000mAh", 2000, 3000),
                Bucket("3000-4000mAh", 3000, 4000),
                Bucket("4000mAh+", 4000, None),
            ),
        ),
        AttributeDef(
            id="price",
            display_name="Price",
            kind=QUANTITATIVE,
            unit="USD",
            direction=LOWER_BETTER,
            buckets=(
                Bucket("<$200", 0, 200),
                Bucket("$200-$500", 200, 500),
                Bucket("$500-$900", 500, 900),
                Bucket("$900+", 900, None),
            ),
        ),
        AttributeDef(
            id="screen_size",
            display_name="Screen size",
            kind=QUANTITATIVE,
            unit="in",
            direction=NEUTRAL,
            buckets=(
                Bucket('<5.0"', 0, 5.0),
                Bucket('5.0-5.9"', 5.0, 6.0),
                Bucket('6.0"+', 6.0, None),
            ),
        ),
        AttributeDef(
            id="storage",
            display_name="Storage",
            kind=QUANTITATIVE,
            unit="GB",
            direction=HIGHER_BETTER,
            buckets=(
                Bucket("32GB", 32, 64),
                Bucket("64GB", 64, 128),
                Bucket("128GB", 128, 256),
                Bucket("256GB+", 256, None),
            ),
        ),
        AttributeDef(
            id="sim_type",
            display_name="SIM type",
            kind=ORDINAL,
            allowed_values=("Single SIM", "Dual SIM"),
            direction=NEUTRAL,
        ),
    )


def _variant_code(variant_tag: str) -> str:
    # last alphanumeric word of the tag, e.g. "baseline-A" -> "A"
    tail = variant_tag.replace("_", "-").split("-")[-1].strip()
    return (tail or "X").upper()[:1]


def generate_catalog(seed: int, count: int, variant_tag: str) -> Catalog:
    rng = random.Random(seed)
    code = _variant_code(variant_tag)
    used_prices: set[int] = set()
    used_names: set[str] = set()
    products = []
    for i in range(count):
        brand = rng.choices(BRANDS, weights=BRAND_WEIGHTS)[0]
        line = rng.choice(BRAND_LINES[brand])
        ram = rng.choices(RAM_GB, weights=RAM_WEIGHTS)[0]
        camera = rng.choices(CAMERA_MP, weights=CAMERA_WEIGHTS)[0]
        battery = rng.randrange(1500, 5001, 50)

        base = BRAND_PRICE_BASE[brand]
        price = int(
            base
            + 18 * ram
            + 4 * camera
            + 0.04 * battery
            + rng.gauss(0, 90)
        )
        price = max(79, min(price, 1399))
        while price in used_prices:
            price += 1
        used_prices.add(price)

        name = f"{brand} {line} {code}{rng.randrange(10, 100)}"
        while name in used_names:
            name = f"{brand} {line} {code}{rng.randrange(10, 100)}"
        used_names.add(name)

        pid = f"{code}{i + 1:03d}"
        values = {
            "brand": brand,
            "model_line": line,
            "os": "iOS" if brand == "Apple" else "Android",
            "ram": ram,
            "camera": camera,
            "battery": battery,
            "price": price,
            "screen_size": round(rng.randrange(40, 70) / 10.0, 1),
            "storage": rng.choices(STORAGE_GB, weights=STORAGE_WEIGHTS)[0],
            "sim_type": rng.choices(("Single SIM", "Dual SIM"), weights=(30, 70))[0],
        }
        for attr_id in SPARSE_ATTRS:
            if rng.random() < SPARSE_DROP_RATE:
                del values[attr_id]

        products.append(
            Product(
                id=pid,
                name=name,
                values=values,
                image_refs=(f"assets/{pid}/front.png", f"assets/{pid}/back.png"),
            )
        )

    return Catalog(variant_tag=variant_tag, schema=smartphone_schema(), products=tuple(products))


#: seeds used for the catalogs bundled with the package
BUNDLED = {
    "baseline-A": {"seed": 11, "count": 100},
    "visualization-B": {"seed": 23, "count": 100},
}


def generate_bundled(variant_tag: str) -> Catalog:
    try:
        params = BUNDLED[variant_tag]
    except KeyError:
        raise KeyError(f"no bundled parameters for variant {variant_tag!r}") from None
    return generate_catalog(params["seed"], params["count"], variant_tag)

"""
Object vocabulary
~~~~~~~~~~~~~~~~~

Built-in categories with dimension ranges in centimetres (length, width,
height). Generators draw whole centimetres so every coordinate they derive sits
on a half-millimetre grid.

"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Role(str, Enum):
    FURNITURE = "furniture"
    GRID_ITEM = "grid_item"


@dataclass(frozen=True)
class Category:
    name: str
    role: Role
    length: tuple[int, int]
    width: tuple[int, int]
    height: tuple[int, int]

    def sample_cm(self, rng: np.random.Generator) -> tuple[int, int, int]:
        """Random dimensions in whole centimetres."""
        return tuple(
            int(rng.integers(low, high + 1))
            for low, high in (self.length, self.width, self.height)
        )


CATEGORIES = (
    # Room furniture
    Category("sofa", Role.FURNITURE, (160, 220), (80, 100), (70, 90)),
    Category("armchair", Role.FURNITURE, (70, 95), (70, 90), (75, 100)),
    Category("coffee table", Role.FURNITURE, (80, 120), (50, 70), (35, 50)),
    Category("dining table", Role.FURNITURE, (120, 180), (75, 100), (72, 78)),
    Category("bookshelf", Role.FURNITURE, (60, 120), (25, 40), (150, 200)),
    Category("bed", Role.FURNITURE, (190, 210), (90, 180), (40, 60)),
    Category("wardrobe", Role.FURNITURE, (80, 150), (50, 65), (180, 220)),
    Category("desk", Role.FURNITURE, (100, 160), (55, 80), (70, 78)),
    Category("floor lamp", Role.FURNITURE, (25, 45), (25, 45), (140, 180)),
    Category("tv stand", Role.FURNITURE, (120, 180), (35, 50), (40, 60)),
    Category("nightstand", Role.FURNITURE, (40, 55), (35, 45), (45, 60)),
    Category("plant", Role.FURNITURE, (30, 60), (30, 60), (60, 150)),
    # Tabletop grid items
    Category("mug", Role.GRID_ITEM, (8, 12), (8, 12), (9, 12)),
    Category("book", Role.GRID_ITEM, (15, 24), (11, 17), (2, 5)),
    Category("bowl", Role.GRID_ITEM, (12, 18), (12, 18), (5, 8)),
    Category("candle", Role.GRID_ITEM, (5, 8), (5, 8), (8, 20)),
    Category("vase", Role.GRID_ITEM, (9, 15), (9, 15), (18, 30)),
    Category("plate", Role.GRID_ITEM, (20, 27), (20, 27), (2, 3)),
    Category("phone", Role.GRID_ITEM, (14, 17), (7, 8), (1, 2)),
    Category("clock", Role.GRID_ITEM, (10, 20), (5, 8), (10, 20)),
)

FURNITURE = tuple(c for c in CATEGORIES if c.role is Role.FURNITURE)
GRID_ITEMS = tuple(c for c in CATEGORIES if c.role is Role.GRID_ITEM)

# Sorting primitives; captions read "<color> <shape> <category>"
COLORS = ("red", "green", "blue", "yellow", "purple", "orange", "white", "black")
SHAPES = ("cube", "cylinder", "sphere", "cone", "prism", "pyramid")
SORT_CATEGORIES = ("block", "toy", "tool", "ornament")
PRIMITIVE_SIZE_CM = (4, 20)

CANONICAL_YAWS = (0.0, 90.0, 180.0, -90.0)


def category(name: str) -> Category:
    for item in CATEGORIES:
        if item.name == name:
            return item
    raise KeyError(name)

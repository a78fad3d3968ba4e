"""Dense grid discretization of fuzzy sets and the binary PGM writer.

The grid stores one grey level per cell in image orientation: row 0 is the
top of the picture, which covers the highest world y. Rendering a fuzzy set
snaps each support point into its containing cell and keeps the maximum
level per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .fuzzy import FuzzySet, GreyLevelMap

PGM_MAXVAL = 255


@dataclass(frozen=True, eq=False)
class GridFuzzySet:
    """Levels on a regular grid over an axis-aligned box (2-D)."""

    lo: Tuple[float, float]
    hi: Tuple[float, float]
    width: int
    height: int
    levels: np.ndarray  # shape (height, width), row 0 = top

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid resolution must be positive")
        if not (self.lo[0] < self.hi[0] and self.lo[1] < self.hi[1]):
            raise ValueError("bounding box is degenerate")
        if self.levels.shape != (self.height, self.width):
            raise ValueError("levels array does not match the resolution")
        if np.any(self.levels < 0) or np.any(self.levels > 1):
            raise ValueError("levels outside [0, 1]")

    @classmethod
    def zeros(cls, lo, hi, width: int, height: int) -> "GridFuzzySet":
        return cls(lo=tuple(map(float, lo)), hi=tuple(map(float, hi)),
                   width=width, height=height,
                   levels=np.zeros((height, width)))

    @classmethod
    def from_fuzzy(cls, u: FuzzySet, lo, hi, width: int, height: int) -> "GridFuzzySet":
        """Rasterize: each support point lands in its containing cell,
        max-combined. Points outside the box are dropped; points on the top
        or right edge fall into the last cell."""
        if u.dimension != 2:
            raise ValueError("grid rendering needs dimension 2")
        g = cls.zeros(lo, hi, width, height)
        levels = g.levels
        x0, y0 = g.lo
        x1, y1 = g.hi
        for p, level in u.items():
            x, y = float(p[0]), float(p[1])
            if not (x0 <= x <= x1 and y0 <= y <= y1):
                continue
            col = min(int((x - x0) / (x1 - x0) * width), width - 1)
            row_up = min(int((y - y0) / (y1 - y0) * height), height - 1)
            row = height - 1 - row_up
            levels[row, col] = max(levels[row, col], float(level))
        return g

    def cell_center(self, row: int, col: int) -> Tuple[float, float]:
        x = self.lo[0] + (col + 0.5) * (self.hi[0] - self.lo[0]) / self.width
        y_up = self.height - 1 - row
        y = self.lo[1] + (y_up + 0.5) * (self.hi[1] - self.lo[1]) / self.height
        return x, y

    def cell_diagonal(self) -> float:
        dx = (self.hi[0] - self.lo[0]) / self.width
        dy = (self.hi[1] - self.lo[1]) / self.height
        return math.hypot(dx, dy)

    def pushforward(self, f) -> "GridFuzzySet":
        """Map occupied cell centers and deposit into the target cells.

        The deposit position is off by at most the map's Lipschitz constant
        times the cell diagonal, the usual raster error.
        """
        moved = GridFuzzySet.zeros(self.lo, self.hi, self.width, self.height)
        levels = moved.levels
        x0, y0 = self.lo
        x1, y1 = self.hi
        rows, cols = np.nonzero(self.levels)
        for row, col in zip(rows.tolist(), cols.tolist()):
            x, y = f(self.cell_center(row, col))
            x, y = float(x), float(y)
            if not (x0 <= x <= x1 and y0 <= y <= y1):
                continue
            tcol = min(int((x - x0) / (x1 - x0) * self.width), self.width - 1)
            trow = self.height - 1 - min(int((y - y0) / (y1 - y0) * self.height), self.height - 1)
            levels[trow, tcol] = max(levels[trow, tcol], float(self.levels[row, col]))
        return moved

    def apply_grey(self, rho: GreyLevelMap) -> "GridFuzzySet":
        if float(rho.value_at_zero) != 0.0:
            raise ValueError("grey map with rho(0) != 0 would light up the whole grid")
        return GridFuzzySet(lo=self.lo, hi=self.hi, width=self.width,
                            height=self.height,
                            levels=rho.eval_array(self.levels))

    def join(self, other: "GridFuzzySet") -> "GridFuzzySet":
        if (self.lo, self.hi, self.width, self.height) != (other.lo, other.hi, other.width, other.height):
            raise ValueError("grids must share geometry")
        return GridFuzzySet(lo=self.lo, hi=self.hi, width=self.width,
                            height=self.height,
                            levels=np.maximum(self.levels, other.levels))

    def to_pgm(self) -> bytes:
        """Binary PGM: pixel = round(maxval * level), row 0 first."""
        header = f"P5\n{self.width} {self.height}\n{PGM_MAXVAL}\n".encode("ascii")
        pixels = np.rint(self.levels * PGM_MAXVAL).astype(np.uint8)
        return header + pixels.tobytes()


def parse_pgm(data: bytes):
    """Parse a binary PGM produced by `to_pgm`; returns (w, h, maxval, levels)."""
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    width, height = (int(tok) for tok in parts[1].split())
    maxval = int(parts[2])
    payload = parts[3]
    if len(payload) != width * height:
        raise ValueError("payload length does not match the header")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return width, height, maxval, pixels

"""Twist sign tables and their bitmap renderings.

Row p, column q of a table holds omega(p, q).  Images are binary PGM (P5)
with +1 drawn gray (192) and -1 drawn white (255).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cdcore import ProductVariant, doubling_steps, omega2_array

GRAY = 192
WHITE = 255
MAX_TABLE_EXP = 12


@dataclass(frozen=True, eq=False)
class OmegaTable:
    variant: ProductVariant
    n: int
    signs: np.ndarray  # int8, shape (2**n, 2**n)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __getitem__(self, pq) -> int:
        return int(self.signs[pq])

    def __eq__(self, other):
        if not isinstance(other, OmegaTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.signs, other.signs)


def _doubling_table(v: ProductVariant, n: int) -> np.ndarray:
    # Level-by-level recursive doubling; the level L-1 table is the memo for
    # every subproduct met at level L.
    steps = doubling_steps(v)
    table = np.ones((1, 1), dtype=np.int8)
    for level in range(1, n + 1):
        size = 1 << level
        p = np.arange(size)[:, None]
        q = np.arange(size)[None, :]
        x, y = p >> 1, q >> 1
        out = np.empty((size, size), dtype=np.int8)
        for pb in (0, 1):
            for qb in (0, 1):
                s = steps[pb][qb]
                xs, ys = x[pb::2], y[:, qb::2]
                left, right = (ys, xs) if s.swap else (xs, ys)
                sign = s.coeff * table[left, right]
                if s.conj_left:
                    sign = np.where(left != 0, -sign, sign)
                if s.conj_right:
                    sign = np.where(right != 0, -sign, sign)
                out[pb::2, qb::2] = sign
        table = out
    return table


def build_table(v, n: int) -> OmegaTable:
    v = ProductVariant.parse(v)
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_TABLE_EXP:
        raise ValueError(f"table exponent must be in 1..{MAX_TABLE_EXP}, got {n!r}")
    size = 1 << n
    if v in (ProductVariant.P2, ProductVariant.T2):
        p = np.arange(size, dtype=np.int64)[:, None]
        q = np.arange(size, dtype=np.int64)[None, :]
        signs = omega2_array(p, q) if v is ProductVariant.P2 else omega2_array(q, p)
    else:
        signs = _doubling_table(v, n)
    signs = np.ascontiguousarray(signs, dtype=np.int8)
    signs.setflags(write=False)
    return OmegaTable(v, n, signs)


def render_pgm(t: OmegaTable) -> bytes:
    h, w = t.signs.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    pixels = np.where(t.signs > 0, GRAY, WHITE).astype(np.uint8)
    return header + pixels.tobytes()


def render_txt(t: OmegaTable) -> str:
    chars = np.where(t.signs > 0, "+", "-")
    return "".join("".join(row) + "\n" for row in chars)


def table_checksum(t: OmegaTable) -> str:
    return hashlib.sha256(render_pgm(t)).hexdigest()


def write_table(t: OmegaTable, path, fmt: str = "pgm") -> Path:
    path = Path(path)
    if fmt == "pgm":
        path.write_bytes(render_pgm(t))
    elif fmt == "txt":
        path.write_text(render_txt(t))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


def read_sums(path) -> dict[tuple[str, int], str]:
    """Parse an ``atlas.sums`` manifest of ``variant n digest`` lines."""
    sums = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        variant, n, digest = line.split()
        sums[ProductVariant.parse(variant).value, int(n)] = digest
    return sums


def format_sums(sums: dict[tuple[str, int], str]) -> str:
    return "".join(f"{v} {n} {d}\n" for (v, n), d in sorted(sums.items()))

"""Perceptual hashing for golden-image comparisons.

Byte-identical output across rendering backends is not realistic, so the
golden tests compare 64-bit difference hashes: downscale to grayscale,
threshold horizontal gradients. Distances of a few bits absorb backend
drift; structural changes cost tens of bits.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

from .errors import IoError


def dhash(path, size: int = 8) -> int:
    """Gradient hash of an image file, size*size bits."""
    try:
        with Image.open(path) as im:
            g = im.convert("L").resize((size + 1, size),
                                       Image.Resampling.LANCZOS)
    except OSError as exc:
        raise IoError(f"cannot read image {path}: {exc}") from exc
    px = np.asarray(g, dtype=np.int16)
    bits = 0
    for r in range(size):
        for c in range(size):
            bits = (bits << 1) | (1 if px[r, c] > px[r, c + 1] else 0)
    return bits


def hamming(a: int, b: int) -> int:
    """Number of differing bits."""
    return bin(a ^ b).count("1")

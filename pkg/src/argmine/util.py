"""Small shared helpers: seed derivation, hashing, float formatting."""

from __future__ import annotations

import hashlib
from pathlib import Path


def derive_seed(base: int, *parts) -> int:
    """Stable child seed from a base seed and any hashable labels.

    Used wherever work is split across folds, permutations, or workers so that
    results do not depend on scheduling order.
    """
    material = repr((int(base),) + tuple(parts)).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def float17(x: float) -> float:
    """Round-trip a float through its 17-significant-digit decimal form."""
    return float(format(float(x), ".17g"))

"""
Curve KD-Tree
-------------

A static kd-tree over 8-dimensional curve keys: the start point, the end point and
the lower left and upper right bounding box corners. Two curves within Frechet
distance delta have keys within delta of each other in every coordinate, so an
orthogonal range query around the key of a query curve returns every curve that
can possibly be close to it.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from frechet_certify import constants as fcc
from frechet_certify.curves import Curve

FloatArray = npt.NDArray[np.float64]
IndexArray = npt.NDArray[np.intp]


def curve_key(c: Curve) -> FloatArray:
    return np.array(
        [
            c.start.x,
            c.start.y,
            c.end.x,
            c.end.y,
            c.bbox.min_x,
            c.bbox.min_y,
            c.bbox.max_x,
            c.bbox.max_y,
        ],
        dtype=np.float64,
    )


@dataclass
class _KdNode:
    dim: int = 0
    value: float = 0.0
    left: "_KdNode | None" = None
    right: "_KdNode | None" = None
    # Dataset indices, set on leaves only.
    indices: IndexArray | None = None


def _build(
    keys: FloatArray, indices: IndexArray, depth: int, leaf_size: int
) -> _KdNode:
    if len(indices) <= leaf_size:
        return _KdNode(indices=np.sort(indices))
    dim = depth % keys.shape[1]
    k = len(indices) // 2
    order = indices[np.argpartition(keys[indices, dim], k)]
    return _KdNode(
        dim=dim,
        value=float(keys[order[k], dim]),
        left=_build(keys, order[:k], depth + 1, leaf_size),
        right=_build(keys, order[k:], depth + 1, leaf_size),
    )


class KdTree8:
    """Balanced kd-tree with median splits cycling through the key dimensions."""

    def __init__(
        self,
        keys: FloatArray,
        ids: Sequence[str],
        leaf_size: int = fcc.KD_LEAF_SIZE,
    ) -> None:
        keys = np.asarray(keys, dtype=np.float64).reshape(-1, fcc.KD_DIMENSIONS)
        if len(keys) != len(ids):
            msg = f"Got {len(keys)} keys for {len(ids)} ids."
            raise ValueError(msg)
        self.keys = keys
        self.ids = list(ids)
        self._root = _build(keys, np.arange(len(keys)), 0, leaf_size)

    @classmethod
    def from_curves(
        cls, curves: Sequence[Curve], leaf_size: int = fcc.KD_LEAF_SIZE
    ) -> "KdTree8":
        keys = np.array([curve_key(c) for c in curves], dtype=np.float64)
        return cls(keys, [c.curve_id for c in curves], leaf_size)

    def __len__(self) -> int:
        return len(self.ids)

    def range_query(self, lo: FloatArray, hi: FloatArray) -> list[int]:
        """Indices of all keys inside the closed box [lo, hi], in ascending order."""
        found: list[int] = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            if node.indices is not None:
                block = self.keys[node.indices]
                inside = np.all((block >= lo) & (block <= hi), axis=1)
                found.extend(int(k) for k in node.indices[inside])
                continue
            if node.left is not None and lo[node.dim] <= node.value:
                stack.append(node.left)
            if node.right is not None and hi[node.dim] >= node.value:
                stack.append(node.right)
        return sorted(found)

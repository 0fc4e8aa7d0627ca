"""
Report-and-Delete Index
-----------------------

A static set of keyed items supporting one query: report and remove every item
whose key lies to the lower right of a point, i.e. ``key.p >= p`` and
``key.q <= q``. Each item is reported at most once over the lifetime of the index.

``PrioritySearchTree`` is a priority search tree: a min-heap on q whose remaining
items are split at the median p into two subtrees. Deleting the root item of a
subtree pulls up the child item with the smaller q. ``LinearScanIndex`` answers
the same query by a scan and backs the differential tests.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Generic, TypeVar

from frechet_certify.geometry import ParamPair

_T = TypeVar("_T")


@dataclass
class _Entry(Generic[_T]):
    key: ParamPair
    item: _T


@dataclass
class _Node(Generic[_T]):
    entry: _Entry[_T] | None
    split: float
    left: "_Node[_T] | None" = None
    right: "_Node[_T] | None" = None


def _build(entries: list[_Entry[_T]]) -> _Node[_T] | None:
    """Build a subtree from entries sorted by key.p."""
    if not entries:
        return None
    top = min(range(len(entries)), key=lambda k: entries[k].key.q)
    rest = entries[:top] + entries[top + 1 :]
    mid = (len(rest) + 1) // 2
    split = rest[mid - 1].key.p if rest else entries[top].key.p
    return _Node(
        entry=entries[top],
        split=split,
        left=_build(rest[:mid]),
        right=_build(rest[mid:]),
    )


def _pull_up(node: _Node[_T]) -> None:
    """Replace the entry of node by the smaller of its children's entries."""
    left = node.left.entry if node.left is not None else None
    right = node.right.entry if node.right is not None else None
    if left is None and right is None:
        node.entry = None
        return
    if right is None or (left is not None and left.key.q <= right.key.q):
        assert node.left is not None
        node.entry = left
        _pull_up(node.left)
    else:
        assert node.right is not None
        node.entry = right
        _pull_up(node.right)


class PrioritySearchTree(Generic[_T]):
    def __init__(self, items: Iterable[tuple[ParamPair, _T]]) -> None:
        entries = [_Entry(ParamPair(*key), item) for key, item in items]
        entries.sort(key=lambda e: e.key.p)
        self._size = len(entries)
        self._root = _build(entries)

    def __len__(self) -> int:
        return self._size

    def report_and_delete(self, point: ParamPair) -> list[_T]:
        reported: list[_T] = []
        if self._root is not None:
            self._report(self._root, point.p, point.q, reported)
        self._size -= len(reported)
        return reported

    def _report(self, node: _Node[_T], p: float, q: float, out: list[_T]) -> None:
        while (
            node.entry is not None and node.entry.key.q <= q and node.entry.key.p >= p
        ):
            out.append(node.entry.item)
            _pull_up(node)
        if node.entry is None or node.entry.key.q > q:
            return
        if node.left is not None and node.split >= p:
            self._report(node.left, p, q, out)
        if node.right is not None:
            self._report(node.right, p, q, out)


class LinearScanIndex(Generic[_T]):
    def __init__(self, items: Iterable[tuple[ParamPair, _T]]) -> None:
        self._entries = [_Entry(ParamPair(*key), item) for key, item in items]

    def __len__(self) -> int:
        return len(self._entries)

    def report_and_delete(self, point: ParamPair) -> list[_T]:
        reported = []
        kept = []
        for entry in self._entries:
            if entry.key.p >= point.p and entry.key.q <= point.q:
                reported.append(entry.item)
            else:
                kept.append(entry)
        self._entries = kept
        return reported

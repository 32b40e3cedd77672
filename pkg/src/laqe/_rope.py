"""Persistent height-balanced rope over layers.

Circuits are split and re-joined constantly by segopt and meld. A plain tuple
makes both O(n); this leaf-oriented AVL rope gives O(log n) split and join
while sharing structure between the pieces. Leaves hold short tuples so that
iteration and small circuits stay cheap.

An empty rope is ``None``.
"""

from __future__ import annotations

from typing import Any, Iterator, Sequence

CHUNK = 32


class Leaf:
    __slots__ = ("items", "length")
    height = 0

    def __init__(self, items: tuple):
        self.items = items
        self.length = len(items)


class Node:
    __slots__ = ("left", "right", "length", "height")

    def __init__(self, left: Leaf | Node, right: Leaf | Node):
        self.left = left
        self.right = right
        self.length = left.length + right.length
        self.height = 1 + max(left.height, right.height)


Rope = Leaf | Node | None


def build(items: Sequence[Any]) -> Rope:
    items = tuple(items)
    if not items:
        return None
    leaves: list[Leaf | Node] = [Leaf(items[i:i + CHUNK]) for i in range(0, len(items), CHUNK)]
    while len(leaves) > 1:
        paired = [Node(leaves[i], leaves[i + 1]) for i in range(0, len(leaves) - 1, 2)]
        if len(leaves) % 2:
            paired.append(leaves[-1])
        leaves = paired
    return leaves[0]


def length(t: Rope) -> int:
    return 0 if t is None else t.length


def _balance(left: Leaf | Node, right: Leaf | Node) -> Node:
    hl, hr = left.height, right.height
    if hl > hr + 1:
        assert isinstance(left, Node)
        if left.left.height >= left.right.height:
            return Node(left.left, Node(left.right, right))
        lr = left.right
        assert isinstance(lr, Node)
        return Node(Node(left.left, lr.left), Node(lr.right, right))
    if hr > hl + 1:
        assert isinstance(right, Node)
        if right.right.height >= right.left.height:
            return Node(Node(left, right.left), right.right)
        rl = right.left
        assert isinstance(rl, Node)
        return Node(Node(left, rl.left), Node(rl.right, right.right))
    return Node(left, right)


def join(a: Rope, b: Rope) -> Rope:
    if a is None:
        return b
    if b is None:
        return a
    if isinstance(a, Leaf) and isinstance(b, Leaf) and a.length + b.length <= CHUNK:
        return Leaf(a.items + b.items)
    if abs(a.height - b.height) <= 1:
        return Node(a, b)
    if a.height > b.height:
        assert isinstance(a, Node)
        return _balance(a.left, join(a.right, b))  # type: ignore[arg-type]
    assert isinstance(b, Node)
    return _balance(join(a, b.left), b.right)  # type: ignore[arg-type]


def split(t: Rope, k: int) -> tuple[Rope, Rope]:
    """Return ``(t[:k], t[k:])``; ``k`` is clamped to ``[0, length(t)]``."""
    if t is None or k <= 0:
        return None, t
    if k >= t.length:
        return t, None
    if isinstance(t, Leaf):
        return Leaf(t.items[:k]), Leaf(t.items[k:])
    nl = t.left.length
    if k < nl:
        a, b = split(t.left, k)
        return a, join(b, t.right)
    if k == nl:
        return t.left, t.right
    a, b = split(t.right, k - nl)
    return join(t.left, a), b


def iterate(t: Rope) -> Iterator[Any]:
    stack: list[Leaf | Node] = [] if t is None else [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            yield from node.items
        else:
            stack.append(node.right)
            stack.append(node.left)


def index(t: Rope, i: int) -> Any:
    if t is None or not 0 <= i < t.length:
        raise IndexError(i)
    while isinstance(t, Node):
        if i < t.left.length:
            t = t.left
        else:
            i -= t.left.length
            t = t.right
    return t.items[i]


def height(t: Rope) -> int:
    return -1 if t is None else t.height

"""Reversible pebbling of the Toom-2.5 recursion tree.

The two alternating Toom levels are collapsed into one 16-ary level, so a
node at level ``x`` has width ``ceil(n / 6**x)`` and the tree has height
``N = ceil(log6 n)``. Leaves (level ``N``) are single Toffolis and hold no
intermediate wires.

A schedule with cut height ``k`` keeps every node above level ``L = N - k``;
each level-``L`` node computes its subtree, hands its value to the parent
(``COPY``) and uncomputes the subtree before the next sibling starts. After
the root is copied out the forward pass is replayed backwards to clean up.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

from .costmodel import TOOM_CUT_DENOM, MirrorRecurrence
from .multipliers import MultiplierConfig
from .netlist import WireAllocator

BRANCH = 16
SHRINK = 6


class Action(str, enum.Enum):
    COMPUTE = "COMPUTE"
    COPY = "COPY"
    UNCOMPUTE = "UNCOMPUTE"


Node = tuple[int, int]          # (level, index within level)


def tree_height(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    height, reach = 0, 1
    while reach < n:
        reach *= SHRINK
        height += 1
    return height


def optimal_cut_level(N: int) -> int:
    """``floor(N / (2 - log16 6))`` clamped to ``[0, N]``."""
    if N < 0:
        raise ValueError(f"tree height must be >= 0, got {N}")
    return max(0, min(N, math.floor(N / TOOM_CUT_DENOM)))


def measured_footprint(width: int, cfg: MultiplierConfig | None = None) -> int:
    """Wires a collapsed node of ``width`` bits leaves allocated, excluding its 16 grandchildren.

    Taken from the construction mirror: the garbage of the ``(w, w)`` call
    minus whatever its grandchildren calls keep.
    """
    mirror = MirrorRecurrence(cfg)
    own = mirror.node(width, width).net_wires
    _, calls = mirror.census(width, width)
    for a, b in calls:
        if mirror.kind(a, b) == "naive":
            continue
        _, grand = mirror.census(a, b)
        own -= sum(mirror.node(ga, gb).net_wires for ga, gb in grand)
    return own


@dataclass(frozen=True)
class RecursionTree:
    """Collapsed 16-ary Toom tree; ``footprint`` is ``"ideal"`` (``n/6**x`` wires) or ``"measured"``."""

    n: int
    footprint: str = "ideal"
    cfg: MultiplierConfig | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.footprint not in ("ideal", "measured"):
            raise ValueError(f"unknown footprint model {self.footprint!r}")

    @cached_property
    def N(self) -> int:
        return tree_height(self.n)

    def width(self, level: int) -> int:
        return -(-self.n // SHRINK ** level)

    @cached_property
    def _spaces(self) -> tuple[int, ...]:
        out = []
        for x in range(self.N + 1):
            if x == self.N:
                out.append(0)
            elif self.footprint == "ideal":
                out.append(self.width(x))
            else:
                out.append(measured_footprint(self.width(x), self.cfg))
        return tuple(out)

    def node_space(self, level: int) -> int:
        return self._spaces[level]

    def level_size(self, level: int) -> int:
        return BRANCH ** level * self.node_space(level)

    def total_space(self) -> int:
        return sum(self.level_size(x) for x in range(self.N + 1))

    def children(self, node: Node) -> list[Node]:
        level, idx = node
        if level >= self.N:
            return []
        return [(level + 1, BRANCH * idx + c) for c in range(BRANCH)]

    def parent(self, node: Node) -> Node | None:
        level, idx = node
        return None if level == 0 else (level - 1, idx // BRANCH)

    @staticmethod
    def path(node: Node) -> str:
        level, idx = node
        digits = []
        for _ in range(level):
            idx, d = divmod(idx, BRANCH)
            digits.append(str(d))
        return ".".join(["r", *reversed(digits)])


@dataclass
class PebbleSchedule:
    tree: RecursionTree
    k: int
    actions: list[tuple[Action, Node]] = field(default_factory=list)
    peak_space: int = 0
    total_depth_units: int = 0

    def __len__(self) -> int:
        return len(self.actions)

    def text(self) -> str:
        return "".join(f"{a.value} {RecursionTree.path(v)}\n" for a, v in self.actions)


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Replay:
    peak_space: int
    final_live: int
    product_live: bool


def _post_order(tree: RecursionTree, root: Node, out: list) -> None:
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append((Action.COMPUTE, node))
            continue
        stack.append((node, True))
        for child in reversed(tree.children(node)):
            stack.append((child, False))


def _cut_block(tree: RecursionTree, node: Node) -> list:
    forward: list = []
    _post_order(tree, node, forward)
    undo = [(Action.UNCOMPUTE, v) for _, v in reversed(forward)]
    return forward + [(Action.COPY, node)] + undo


def _swap(actions) -> list:
    flip = {Action.COMPUTE: Action.UNCOMPUTE, Action.UNCOMPUTE: Action.COMPUTE, Action.COPY: Action.COPY}
    return [(flip[a], v) for a, v in reversed(actions)]


def make_schedule(tree: RecursionTree, k: int) -> PebbleSchedule:
    N = tree.N
    if not 0 <= k <= N:
        raise ValueError(f"cut height k={k} outside [0, {N}]")
    root: Node = (0, 0)
    if N == 0:
        actions = [(Action.COMPUTE, root), (Action.COPY, root)]
    elif k == N:
        actions = _cut_block(tree, root)
    else:
        cut = N - k
        forward: list = []
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if node[0] == cut:
                forward.extend(_cut_block(tree, node))
            elif expanded:
                forward.append((Action.COMPUTE, node))
            else:
                stack.append((node, True))
                for child in reversed(tree.children(node)):
                    stack.append((child, False))
        actions = forward + [(Action.COPY, root)] + _swap(forward)
    sched = PebbleSchedule(tree, k, actions)
    sched.peak_space = replay(sched).peak_space
    sched.total_depth_units = depth_under_schedule(tree, k)
    return sched


def replay(sched: PebbleSchedule) -> Replay:
    """Run the schedule against a wire allocator, enforcing the pebbling rules.

    ``COMPUTE v`` needs every child live or already copied into ``v``'s
    parent slot; ``UNCOMPUTE v`` needs the same, plus ``v`` copied or its
    parent gone, so no value is removed while a live parent still needs it.
    ``COPY`` toggles the copied flag (it is its own inverse); on the root it
    toggles the product register, which is not counted in the peak.
    """
    tree = sched.tree
    alloc = WireAllocator()
    held: dict[Node, list[int]] = {}
    copied: set[Node] = set()
    product = False
    root = (0, 0)

    def available(v: Node) -> bool:
        return v in held or v in copied

    for step, (action, v) in enumerate(sched.actions):
        kids = tree.children(v)
        if action is Action.COMPUTE:
            if v in held:
                raise ScheduleError(f"step {step}: {tree.path(v)} computed twice")
            if not all(available(c) for c in kids):
                raise ScheduleError(f"step {step}: {tree.path(v)} computed before its children")
            held[v] = alloc.allocate(tree.node_space(v[0]))
        elif action is Action.UNCOMPUTE:
            if v not in held:
                raise ScheduleError(f"step {step}: {tree.path(v)} uncomputed while not live")
            if not all(available(c) for c in kids):
                raise ScheduleError(f"step {step}: {tree.path(v)} uncomputed after its children")
            parent = tree.parent(v)
            if v not in copied and parent is not None and parent in held:
                raise ScheduleError(f"step {step}: {tree.path(v)} uncomputed while its parent still uses it")
            alloc.free(held.pop(v))
        else:
            if v not in held:
                raise ScheduleError(f"step {step}: {tree.path(v)} copied while not live")
            if v == root:
                product = not product
            else:
                copied.symmetric_difference_update({v})
    dirty = [v for v, wires in held.items() if wires]
    if dirty or copied:
        raise ScheduleError(f"{len(dirty)} nodes still hold wires, {len(copied)} copies outstanding")
    return Replay(alloc.high_water, alloc.live_count, product)


def space_unoptimized(n: int) -> int:
    """Wires of the whole tree held at once: ``sum_{x<N} 16**x * ceil(n/6**x)``."""
    tree = RecursionTree(n)
    return sum(tree.level_size(x) for x in range(tree.N))


def depth_under_schedule(tree: RecursionTree, k: int) -> int:
    """``ST_k * D_k``: ``16**(N-k)`` sequential subtrees of depth ``n / 6**(N-k)`` each."""
    if not 0 <= k <= tree.N:
        raise ValueError(f"cut height k={k} outside [0, {tree.N}]")
    levels = tree.N - k
    return BRANCH ** levels * tree.width(levels)


def peak_by_cut(tree: RecursionTree) -> dict[int, int]:
    return {k: make_schedule(tree, k).peak_space for k in range(tree.N + 1)}

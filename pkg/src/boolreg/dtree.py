"""Decision trees with subfunction leaves, leaf-mass accounting, and energy.

Trees are persistent: a split returns a new tree sharing every untouched
branch.  A leaf at depth d carries mass 2^-d, the probability of reaching
it by uniformly random decisions from the root.  Leaf ids are stable under
splits of other leaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .boolfn import BooleanFunction, restrict, wht
from .noise import has_small_noisy_influences, all_noisy_influences, stability


@dataclass(frozen=True)
class Leaf:
    id: int
    fn: BooleanFunction
    fixed: dict[int, int]  # root-to-leaf path: variable -> assigned value, treat as immutable


@dataclass(frozen=True)
class Internal:
    var: int
    child_plus: "Node"   # taken when x_var = +1 (input bit var = 0)
    child_minus: "Node"


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class DecisionTree:
    n: int
    root: Node
    next_leaf_id: int


@dataclass
class EnergyLedger:
    """Energy trace of an iterative decomposition.

    ``history`` holds one (iteration, phi) pair per recorded state, starting
    at iteration 0; ``depths`` is index-aligned and records tree depth so
    growth recurrences can be audited afterwards.
    """

    phi: float
    history: list[tuple[int, float]] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)

    def record(self, iteration: int, phi: float, depth: int) -> None:
        self.phi = phi
        self.history.append((iteration, phi))
        self.depths.append(depth)


def singleton(f: BooleanFunction) -> DecisionTree:
    """One leaf holding f itself; the starting point of every decomposition."""
    return DecisionTree(f.n, Leaf(0, f, {}), 1)


def leaves(t: DecisionTree) -> list[tuple[Leaf, int]]:
    """All (leaf, depth) pairs in left-to-right order (plus branch first)."""
    out: list[tuple[Leaf, int]] = []

    def walk(node: Node, depth: int) -> None:
        if isinstance(node, Leaf):
            out.append((node, depth))
        else:
            walk(node.child_plus, depth + 1)
            walk(node.child_minus, depth + 1)

    walk(t.root, 0)
    return out


def tree_depth(t: DecisionTree) -> int:
    return max(depth for _, depth in leaves(t))


def evaluate(t: DecisionTree, b: int) -> float:
    """Walk the tree by the bits of input index b, then evaluate the leaf."""
    if not 0 <= b < (1 << t.n):
        raise IndexError(f"input index {b} out of range for n={t.n}")
    node = t.root
    while isinstance(node, Internal):
        node = node.child_minus if (b >> node.var) & 1 else node.child_plus
    return float(node.fn.values[b])


def evaluate_table(t: DecisionTree) -> np.ndarray:
    """Vector of evaluate(t, b) over all 2^n inputs."""

    def walk(node: Node) -> np.ndarray:
        if isinstance(node, Leaf):
            return node.fn.values
        plus = walk(node.child_plus)
        minus = walk(node.child_minus)
        bit = (np.arange(1 << t.n) >> node.var) & 1
        return np.where(bit == 0, plus, minus)

    return walk(t.root)


def _split_node(leaf: Leaf, j: int, first_id: int) -> Internal:
    if j in leaf.fixed:
        raise ValueError(f"variable {j} already fixed on the path to leaf {leaf.id}")
    plus = Leaf(first_id, restrict(leaf.fn, j, 1), {**leaf.fixed, j: 1})
    minus = Leaf(first_id + 1, restrict(leaf.fn, j, -1), {**leaf.fixed, j: -1})
    return Internal(j, plus, minus)


def split_leaf(t: DecisionTree, leaf_id: int, j: int) -> DecisionTree:
    """Replace one leaf by a query to variable j; other leaves are untouched."""
    if not 0 <= j < t.n:
        raise IndexError(f"variable index {j} out of range for n={t.n}")
    found = False

    def walk(node: Node) -> Node:
        nonlocal found
        if isinstance(node, Leaf):
            if node.id != leaf_id:
                return node
            found = True
            return _split_node(node, j, t.next_leaf_id)
        plus = walk(node.child_plus)
        minus = walk(node.child_minus)
        if plus is node.child_plus and minus is node.child_minus:
            return node
        return Internal(node.var, plus, minus)

    root = walk(t.root)
    if not found:
        raise KeyError(f"no leaf with id {leaf_id}")
    return DecisionTree(t.n, root, t.next_leaf_id + 2)


def split_all_leaves(t: DecisionTree, j: int) -> DecisionTree:
    """Split every leaf on variable j (used by the homogeneous decomposition)."""
    if not 0 <= j < t.n:
        raise IndexError(f"variable index {j} out of range for n={t.n}")
    next_id = t.next_leaf_id

    def walk(node: Node) -> Node:
        nonlocal next_id
        if isinstance(node, Leaf):
            split = _split_node(node, j, next_id)
            next_id += 2
            return split
        return Internal(node.var, walk(node.child_plus), walk(node.child_minus))

    return DecisionTree(t.n, walk(t.root), next_id)


def energy(t: DecisionTree, delta: float) -> float:
    """Leaf-mass-weighted average of Stab_{1-delta} over the leaf subfunctions."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return float(sum(2.0 ** -depth * stability(wht(leaf.fn), 1.0 - delta)
                     for leaf, depth in leaves(t)))


def bad_leaf_mass(t: DecisionTree, eps: float, delta: float) -> float:
    """Total mass of leaves whose subfunction fails the small-influence test."""
    return float(sum(2.0 ** -depth for leaf, depth in leaves(t)
                     if not has_small_noisy_influences(leaf.fn, eps, delta).ok))


def to_dot(t: DecisionTree, delta: float) -> str:
    """DOT rendering: internal nodes x<i+1>, edges +1/-1, leaf summaries."""
    lines = ["digraph dtree {"]
    counter = 0

    def walk(node: Node, depth: int) -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        if isinstance(node, Leaf):
            fn_mean = float(np.mean(node.fn.values))
            max_inf = float(np.max(all_noisy_influences(node.fn, delta)))
            lines.append(
                f'  {name} [shape=box, label="L{node.id}\\ndepth={depth}'
                f'\\nmean={fn_mean:.6g}\\nmax_inf={max_inf:.6g}"];'
            )
            return name
        lines.append(f'  {name} [label="x{node.var + 1}"];')
        plus = walk(node.child_plus, depth + 1)
        minus = walk(node.child_minus, depth + 1)
        lines.append(f'  {name} -> {plus} [label="+1"];')
        lines.append(f'  {name} -> {minus} [label="-1"];')
        return name

    walk(t.root, 0)
    lines.append("}")
    return "\n".join(lines) + "\n"

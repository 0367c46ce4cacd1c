"""Pairing combinatorics and construction of the binary merge tree.

Counts are exact Python integers (arbitrary precision), so factorial growth
can never wrap around. Enumeration is capped: the number of pairings of 2n
nodes is the double factorial (2n-1)!!, which explodes quickly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .arima import ArimaModel
from .errors import EmptyInputError, OddInputError, TooLargeError
from .merging import MergedModel, average_merge

MAX_ENUMERATION = 12

STRATEGIES = ("adjacent", "similarity")


def count_pairings(two_n: int) -> int:
    """Number of ways to split 2n nodes into n unordered pairs:
    T(2n) = (2n-1) * T(2n-2), T(2) = 1."""
    if two_n < 2 or two_n % 2 != 0:
        raise OddInputError(f"need an even node count >= 2, got {two_n}")
    value = 1
    for k in range(two_n, 2, -2):
        value *= k - 1
    return value


def ceil_to_even(n: int) -> int:
    return n if n % 2 == 0 else n + 1


def count_trees(n: int) -> int:
    """Number of full pairing-tree structures over n nodes:
    G(2) = 1, G(n) = T(n) * G(n/2), with an odd n/2 rounded up to the next
    even integer before recursing."""
    if n < 2 or n % 2 != 0:
        raise OddInputError(f"need an even node count >= 2, got {n}")
    value = 1
    while n > 2:
        value *= count_pairings(n)
        n = ceil_to_even(n // 2)
    return value


def enumerate_pairings(ids: Sequence[Hashable]) -> list[tuple[tuple[Hashable, Hashable], ...]]:
    """All distinct partitions of ids into unordered pairs."""
    items = list(ids)
    if len(items) % 2 != 0 or not items:
        raise OddInputError(f"need an even number of identifiers, got {len(items)}")
    if len(items) > MAX_ENUMERATION:
        raise TooLargeError(
            f"enumeration supports up to {MAX_ENUMERATION} identifiers, got {len(items)}"
        )

    def rec(rest: list) -> list[tuple]:
        if not rest:
            return [()]
        first, tail = rest[0], rest[1:]
        out = []
        for i, partner in enumerate(tail):
            remaining = tail[:i] + tail[i + 1:]
            for sub in rec(remaining):
                out.append(((first, partner),) + sub)
        return out

    return rec(items)


@dataclass
class MergeNode:
    """Binary tree node; leaves hold fitted models, internal nodes hold the
    merged model of their two children."""

    model: ArimaModel
    leaf_ids: tuple[str, ...]
    children: tuple["MergeNode", "MergeNode"] | tuple[()] = ()
    merged: MergedModel | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class MergeTree:
    root: MergeNode
    levels: tuple[tuple[MergeNode, ...], ...] = field(default_factory=tuple)

    @property
    def leaves(self) -> tuple[MergeNode, ...]:
        return self.levels[0]


def _pair_up(nodes: list[MergeNode], strategy: str) -> list[MergeNode]:
    if strategy == "similarity":
        nodes = sorted(nodes, key=lambda n: n.model.constant)
    nxt: list[MergeNode] = []
    for i in range(0, len(nodes) - 1, 2):
        a, b = nodes[i], nodes[i + 1]
        mm = average_merge(
            a.model, b.model,
            child_ids=(";".join(a.leaf_ids), ";".join(b.leaf_ids)),
        )
        nxt.append(
            MergeNode(
                model=mm.model,
                leaf_ids=a.leaf_ids + b.leaf_ids,
                children=(a, b),
                merged=mm,
            )
        )
    if len(nodes) % 2 == 1:
        # odd one out is promoted unchanged to the next level
        nxt.append(nodes[-1])
    return nxt


def build_merge_tree(
    models: Sequence[ArimaModel],
    strategy: str = "adjacent",
    ids: Sequence[str] | None = None,
) -> MergeTree:
    """Merge models pairwise level by level until one root model remains.

    The adjacent strategy pairs (1,2), (3,4), ... in input order at every
    level; the similarity strategy re-sorts each level by model constant and
    pairs sorted neighbours, so nodes sensing similar values merge first.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if not models:
        raise EmptyInputError("no models to build a tree from")
    if ids is None:
        ids = [str(i) for i in range(1, len(models) + 1)]
    if len(ids) != len(models):
        raise ValueError("ids and models must have equal length")
    level = [MergeNode(model=m, leaf_ids=(str(i),)) for i, m in zip(ids, models)]
    levels = [tuple(level)]
    while len(level) > 1:
        level = _pair_up(level, strategy)
        levels.append(tuple(level))
    return MergeTree(root=level[0], levels=tuple(levels))


def tree_to_dict(tree: MergeTree) -> dict:
    """JSON-ready dump of the levels with leaf ids and model rows."""
    def node_dict(n: MergeNode) -> dict:
        d = {
            "leaf_ids": list(n.leaf_ids),
            "constant": n.model.constant,
            "ar_coeffs": list(n.model.ar_coeffs),
            "ma_coeffs": list(n.model.ma_coeffs),
            "error_value": n.model.error_value,
            "weight": n.model.weight,
        }
        if n.merged is not None:
            d["deviations"] = [
                {
                    "child_id": dev.child_id,
                    "sigma_constant": dev.sigma_constant,
                    "sigma_phi": dev.sigma_phi,
                    "sigma_psi": dev.sigma_psi,
                }
                for dev in n.merged.deviations
            ]
        return d

    return {
        "levels": [
            {"level": i, "nodes": [node_dict(n) for n in lvl]}
            for i, lvl in enumerate(tree.levels)
        ]
    }


def render_tree(tree: MergeTree) -> str:
    """Indented per-level text dump for terminal display."""
    lines = []
    for i, lvl in enumerate(tree.levels):
        lines.append(f"level {i}:")
        for n in lvl:
            coeffs = ", ".join(f"{c:.4f}" for c in n.model.ar_coeffs + n.model.ma_coeffs)
            lines.append(
                f"  [{';'.join(n.leaf_ids)}] constant={n.model.constant:.4f}"
                f" coeffs=({coeffs}) error={n.model.error_value:.4f}"
                f" weight={n.model.weight}"
            )
    return "\n".join(lines)

"""Time-series container, d-fold differencing and its exact inverse."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import SeedMismatchError, SeriesTooShortError


@dataclass(frozen=True)
class Series:
    """Ordered readings of one node; index order is time order."""

    node_id: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 1:
            raise SeriesTooShortError(f"series {self.node_id!r} is empty")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"series {self.node_id!r} contains non-finite values")
        object.__setattr__(self, "values", vals)

    @property
    def length(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DiffSeed:
    """Leading values consumed by differencing, one per level; lets
    :func:`integrate` invert :func:`difference` exactly."""

    order: int
    seeds: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "seeds", tuple(float(v) for v in self.seeds))
        if len(self.seeds) != self.order:
            raise SeedMismatchError(
                f"expected {self.order} seeds, got {len(self.seeds)}"
            )


@dataclass(frozen=True)
class SeriesSummary:
    mean: float
    min: float
    max: float


def difference(s: Series, d: int) -> tuple[Series, DiffSeed]:
    """Apply d levels of first differencing; returns the shortened series and
    the seed values needed to undo it."""
    if d < 0:
        raise ValueError("differencing order must be >= 0")
    if s.length <= d:
        raise SeriesTooShortError(
            f"series of length {s.length} cannot be differenced {d} times"
        )
    vals = list(s.values)
    seeds = []
    for _ in range(d):
        seeds.append(vals[0])
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return Series(s.node_id, tuple(vals)), DiffSeed(d, tuple(seeds))


def integrate(diffs: Series, seed: DiffSeed) -> Series:
    """Exact inverse of :func:`difference`: cumulative sums re-anchored at the
    stored seeds, innermost level first."""
    vals = list(diffs.values)
    for start in reversed(seed.seeds):
        out = [start]
        for v in vals:
            out.append(out[-1] + v)
        vals = out
    return Series(diffs.node_id, tuple(vals))


def summary(s: Series) -> SeriesSummary:
    return SeriesSummary(
        mean=math.fsum(s.values) / s.length,
        min=min(s.values),
        max=max(s.values),
    )


def from_values(node_id: str, values: Iterable[float]) -> Series:
    return Series(node_id, tuple(values))


def diff_values(values: Sequence[float], d: int) -> list[float]:
    """Differenced raw values without the container bookkeeping."""
    vals = list(values)
    if len(vals) <= d:
        raise SeriesTooShortError(
            f"{len(vals)} values cannot be differenced {d} times"
        )
    for _ in range(d):
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return vals

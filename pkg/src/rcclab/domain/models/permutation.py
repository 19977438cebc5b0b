"""Cycle and orbit helpers for permutations and self-maps of ``range(n)``."""

from collections import Counter
from collections.abc import Sequence
from math import lcm

import numpy as np

type IndexArray = np.ndarray[tuple[int], np.dtype[np.int64]]


def as_index_array(mapping: Sequence[int] | IndexArray) -> IndexArray:
    return np.asarray(mapping, dtype=np.int64)


def is_permutation(mapping: Sequence[int] | IndexArray) -> bool:
    arr = as_index_array(mapping)
    n = len(arr)
    if n and (arr.min() < 0 or arr.max() >= n):
        return False
    return bool(np.unique(arr).size == n)


def point_cycle_lengths(perm: Sequence[int] | IndexArray) -> list[int]:
    """Length of the cycle through each point of a permutation."""
    images = as_index_array(perm).tolist()
    lengths = [0] * len(images)
    for start in range(len(images)):
        if lengths[start]:
            continue
        cycle = [start]
        point = images[start]
        while point != start:
            cycle.append(point)
            point = images[point]
        for member in cycle:
            lengths[member] = len(cycle)
    return lengths


def cycle_census(perm: Sequence[int] | IndexArray) -> dict[int, int]:
    """Map cycle length d to the number of points on cycles of length d."""
    return dict(sorted(Counter(point_cycle_lengths(perm)).items()))


def permutation_order(perm: Sequence[int] | IndexArray) -> int:
    return lcm(*cycle_census(perm)) if len(perm) else 1


def compose(outer: Sequence[int] | IndexArray, inner: Sequence[int] | IndexArray) -> IndexArray:
    """The map ``x -> outer[inner[x]]``."""
    return as_index_array(outer)[as_index_array(inner)]


def inverse(perm: Sequence[int] | IndexArray) -> IndexArray:
    arr = as_index_array(perm)
    result = np.empty_like(arr)
    result[arr] = np.arange(len(arr), dtype=np.int64)
    return result


def power(mapping: Sequence[int] | IndexArray, exponent: int) -> IndexArray:
    """The ``exponent``-fold composite of a self-map (exponent >= 0)."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    base = as_index_array(mapping)
    result = np.arange(len(base), dtype=np.int64)
    while exponent:
        if exponent & 1:
            result = base[result]
        base = base[base]
        exponent >>= 1
    return result


def tail_and_period(mapping: Sequence[int] | IndexArray) -> tuple[int, int]:
    """Least (t, c) with f^(t+c) = f^t for an arbitrary self-map f.

    t is the longest path into a cycle, c the lcm of the cycle lengths.
    """
    images = as_index_array(mapping).tolist()
    n = len(images)
    on_cycle = [False] * n
    state = [0] * n  # 0 unseen, 1 on stack, 2 done
    for start in range(n):
        if state[start]:
            continue
        path: list[int] = []
        point = start
        while state[point] == 0:
            state[point] = 1
            path.append(point)
            point = images[point]
        if state[point] == 1:
            for member in path[path.index(point) :]:
                on_cycle[member] = True
        for member in path:
            state[member] = 2
    depth = [0 if on_cycle[x] else -1 for x in range(n)]
    for start in range(n):
        trail = []
        point = start
        while depth[point] < 0:
            trail.append(point)
            point = images[point]
        for member in reversed(trail):
            depth[member] = depth[images[member]] + 1
    cycle_points = [x for x in range(n) if on_cycle[x]]
    period = lcm(*(len(_orbit(images, x)) for x in cycle_points)) if cycle_points else 1
    return (max(depth, default=0), period)


def _orbit(images: list[int], start: int) -> list[int]:
    orbit = [start]
    point = images[start]
    while point != start:
        orbit.append(point)
        point = images[point]
    return orbit

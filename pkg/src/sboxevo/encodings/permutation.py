"""Permutation genotype and its balancedness-preserving operators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from ..sbox import SBox, SBoxError


@dataclass(frozen=True)
class PermutationGenotype:
    n: int
    genes: tuple[int, ...]

    def __post_init__(self):
        size = 1 << self.n
        genes = self.genes
        if len(genes) != size or len(set(genes)) != size or min(genes) < 0 or max(genes) >= size:
            raise SBoxError(f"genes are not a permutation of range({size})")


def decode_permutation(g: PermutationGenotype) -> SBox:
    return SBox(g.n, g.genes)


def random_permutation(n: int, rng: random.Random) -> PermutationGenotype:
    genes = list(range(1 << n))
    rng.shuffle(genes)
    return PermutationGenotype(n, tuple(genes))


# -- mutations ---------------------------------------------------------------


def swap(genes: Sequence[int], i: int, j: int) -> list[int]:
    out = list(genes)
    out[i], out[j] = out[j], out[i]
    return out


def inversion(genes: Sequence[int], i: int, j: int) -> list[int]:
    """Reverse the inclusive segment [i, j]."""
    out = list(genes)
    out[i:j + 1] = out[i:j + 1][::-1]
    return out


def insert(genes: Sequence[int], src: int, dst: int) -> list[int]:
    """Remove the element at ``src`` and reinsert it at index ``dst``."""
    out = list(genes)
    out.insert(dst, out.pop(src))
    return out


PERM_MUTATIONS = ("insert", "inversion", "swap")


def perm_mutate(g: PermutationGenotype, rng: random.Random,
                operator: Optional[str] = None) -> PermutationGenotype:
    operator = operator or rng.choice(PERM_MUTATIONS)
    i, j = rng.sample(range(len(g.genes)), 2)
    if operator == "swap":
        genes = swap(g.genes, i, j)
    elif operator == "inversion":
        genes = inversion(g.genes, min(i, j), max(i, j))
    elif operator == "insert":
        genes = insert(g.genes, i, j)
    else:
        raise ValueError(f"unknown permutation mutation {operator!r}")
    return PermutationGenotype(g.n, tuple(genes))


# -- crossovers --------------------------------------------------------------


def pmx(p1: Sequence[int], p2: Sequence[int], i: int, j: int) -> list[int]:
    """Partially mapped crossover keeping p1[i..j]; the rest comes from p2
    with conflicts resolved through the segment mapping."""
    size = len(p1)
    child = [-1] * size
    child[i:j + 1] = p1[i:j + 1]
    in_segment = set(p1[i:j + 1])
    pos_in_p1 = {v: k for k, v in enumerate(p1)}
    for k in list(range(i)) + list(range(j + 1, size)):
        v = p2[k]
        while v in in_segment:
            v = p2[pos_in_p1[v]]
        child[k] = v
    return child


def pbx(p1: Sequence[int], p2: Sequence[int], positions: set[int]) -> list[int]:
    """Position-based crossover: p1 values at ``positions``, remaining slots
    filled with the unused values in p2 order."""
    child = [-1] * len(p1)
    for k in positions:
        child[k] = p1[k]
    used = {p1[k] for k in positions}
    rest = iter(v for v in p2 if v not in used)
    return [next(rest) if c < 0 else c for c in child]


def ox(p1: Sequence[int], p2: Sequence[int], i: int, j: int) -> list[int]:
    """Order crossover: keep p1[i..j], fill from position j+1 (wrapping)
    with p2's values in order starting at j+1."""
    size = len(p1)
    child = [-1] * size
    child[i:j + 1] = p1[i:j + 1]
    used = set(p1[i:j + 1])
    order = [p2[(j + 1 + k) % size] for k in range(size)]
    fill = (v for v in order if v not in used)
    for k in range(size - (j - i + 1)):
        child[(j + 1 + k) % size] = next(fill)
    return child


def ulx(p1: Sequence[int], p2: Sequence[int], rng: random.Random) -> list[int]:
    """Uniform-like crossover.

    Positions where the parents agree are copied. The others are filled left
    to right with a randomly chosen parent's gene if unused, else the other
    parent's gene if unused; positions where both are used are filled at the
    end with a random arrangement of the leftover values.
    """
    size = len(p1)
    child = [-1] * size
    used = set()
    for k in range(size):
        if p1[k] == p2[k]:
            child[k] = p1[k]
            used.add(p1[k])
    deferred = []
    for k in range(size):
        if child[k] >= 0:
            continue
        first, second = (p1[k], p2[k]) if rng.random() < 0.5 else (p2[k], p1[k])
        if first not in used:
            child[k] = first
        elif second not in used:
            child[k] = second
        else:
            deferred.append(k)
            continue
        used.add(child[k])
    leftover = [v for v in range(size) if v not in used]
    rng.shuffle(leftover)
    for k, v in zip(deferred, leftover):
        child[k] = v
    return child


def cycles(p1: Sequence[int], p2: Sequence[int]) -> list[list[int]]:
    """Position cycles of the pair, in order of their smallest position."""
    pos_in_p1 = {v: k for k, v in enumerate(p1)}
    seen = [False] * len(p1)
    out = []
    for start in range(len(p1)):
        if seen[start]:
            continue
        cyc = []
        k = start
        while not seen[k]:
            seen[k] = True
            cyc.append(k)
            k = pos_in_p1[p2[k]]
        out.append(cyc)
    return out


def cyclic(p1: Sequence[int], p2: Sequence[int]) -> list[int]:
    """Cycle crossover; cycles alternate between p1 and p2, starting with p1."""
    child = list(p1)
    for idx, cyc in enumerate(cycles(p1, p2)):
        if idx % 2:
            for k in cyc:
                child[k] = p2[k]
    return child


PERM_CROSSOVERS = ("PMX", "PBX", "OX", "ULX", "cyclic")


def perm_crossover(p1: PermutationGenotype, p2: PermutationGenotype, rng: random.Random,
                   operator: Optional[str] = None) -> PermutationGenotype:
    if p1.n != p2.n:
        raise SBoxError("parents differ in bit-width")
    operator = operator or rng.choice(PERM_CROSSOVERS)
    a, b = p1.genes, p2.genes
    size = len(a)
    if operator == "PMX":
        i, j = sorted(rng.sample(range(size), 2))
        genes = pmx(a, b, i, j)
    elif operator == "OX":
        i, j = sorted(rng.sample(range(size), 2))
        genes = ox(a, b, i, j)
    elif operator == "PBX":
        genes = pbx(a, b, {k for k in range(size) if rng.random() < 0.5})
    elif operator == "ULX":
        genes = ulx(a, b, rng)
    elif operator == "cyclic":
        genes = cyclic(a, b)
    else:
        raise ValueError(f"unknown permutation crossover {operator!r}")
    return PermutationGenotype(p1.n, tuple(genes))

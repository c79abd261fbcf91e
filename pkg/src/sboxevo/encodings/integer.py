"""Integer-vector genotype: gene x is the S-box output for input x."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from ..sbox import SBox, SBoxError


@dataclass(frozen=True)
class IntegerGenotype:
    n: int
    genes: tuple[int, ...]

    def __post_init__(self):
        size = 1 << self.n
        if len(self.genes) != size:
            raise SBoxError(f"integer genotype needs {size} genes, got {len(self.genes)}")
        if size and (min(self.genes) < 0 or max(self.genes) >= size):
            raise SBoxError(f"gene outside [0, {size})")


def decode_integer(g: IntegerGenotype) -> SBox:
    return SBox(g.n, g.genes)


def random_integer(n: int, rng: random.Random) -> IntegerGenotype:
    size = 1 << n
    return IntegerGenotype(n, tuple(rng.randrange(size) for _ in range(size)))


def int_mutate(g: IntegerGenotype, rng: random.Random) -> IntegerGenotype:
    """Resample one uniformly chosen gene from [0, 2^n)."""
    size = 1 << g.n
    genes = list(g.genes)
    pos = rng.randrange(size)
    genes[pos] = rng.randrange(size)
    return IntegerGenotype(g.n, tuple(genes))


def one_point(p1: IntegerGenotype, p2: IntegerGenotype, cut: int) -> IntegerGenotype:
    return IntegerGenotype(p1.n, p1.genes[:cut] + p2.genes[cut:])


def two_point(p1: IntegerGenotype, p2: IntegerGenotype, c1: int, c2: int) -> IntegerGenotype:
    return IntegerGenotype(p1.n, p1.genes[:c1] + p2.genes[c1:c2] + p1.genes[c2:])


def average(p1: IntegerGenotype, p2: IntegerGenotype) -> IntegerGenotype:
    # half values round up
    return IntegerGenotype(p1.n, tuple((a + b + 1) // 2 for a, b in zip(p1.genes, p2.genes)))


INT_CROSSOVERS = ("one-point", "two-point", "average")


def int_crossover(p1: IntegerGenotype, p2: IntegerGenotype, rng: random.Random,
                  operator: Optional[str] = None) -> IntegerGenotype:
    if p1.n != p2.n:
        raise SBoxError("parents differ in bit-width")
    operator = operator or rng.choice(INT_CROSSOVERS)
    size = 1 << p1.n
    if operator == "one-point":
        return one_point(p1, p2, rng.randint(1, size - 1))
    if operator == "two-point":
        c1, c2 = sorted(rng.sample(range(1, size), 2))
        return two_point(p1, p2, c1, c2)
    if operator == "average":
        return average(p1, p2)
    raise ValueError(f"unknown integer crossover {operator!r}")

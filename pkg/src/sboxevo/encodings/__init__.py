"""Genotype encodings for S-boxes and their variation operators.

Three encodings are available under the names ``integer``, ``permutation``
and ``ca``. Each is described by an :class:`Encoding` bundling the random
initializer, the decoder to :class:`~sboxevo.sbox.SBox` and the operator
suites; operators are picked uniformly at random on every application.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Union

from ..sbox import SBox
from .integer import (
    INT_CROSSOVERS,
    IntegerGenotype,
    decode_integer,
    int_crossover,
    int_mutate,
    random_integer,
)
from .permutation import (
    PERM_CROSSOVERS,
    PERM_MUTATIONS,
    PermutationGenotype,
    decode_permutation,
    perm_crossover,
    perm_mutate,
    random_permutation,
)
from .ruletree import (
    GP_CROSSOVERS,
    Node,
    RuleTree,
    decode_ca_rule,
    gp_crossover,
    gp_mutate,
    parse_prefix,
    random_rule,
)

Genotype = Union[IntegerGenotype, PermutationGenotype, RuleTree]


@dataclass(frozen=True)
class Encoding:
    name: str
    random: Callable[[int, random.Random], Genotype]
    decode: Callable[[Genotype], SBox]
    crossover: Callable[[Genotype, Genotype, random.Random], Genotype]
    mutate: Callable[[Genotype, random.Random], Genotype]
    serialize: Callable[[Genotype], str]
    parse: Callable[[str, int], Genotype]
    balanced: bool = False  # every decoded S-box is a permutation


def _genes_to_str(g) -> str:
    return " ".join(map(str, g.genes))


INTEGER = Encoding(
    "integer", random_integer, decode_integer, int_crossover, int_mutate,
    _genes_to_str, lambda s, n: IntegerGenotype(n, tuple(int(t) for t in s.split())),
)
PERMUTATION = Encoding(
    "permutation", random_permutation, decode_permutation, perm_crossover, perm_mutate,
    _genes_to_str, lambda s, n: PermutationGenotype(n, tuple(int(t) for t in s.split())),
    balanced=True,
)
CA = Encoding(
    "ca", random_rule, decode_ca_rule, gp_crossover, gp_mutate, str, parse_prefix,
)

ENCODINGS = {e.name: e for e in (INTEGER, PERMUTATION, CA)}
ALIASES = {"int": "integer", "perm": "permutation", "integer": "integer",
           "permutation": "permutation", "ca": "ca"}


def get_encoding(name: str) -> Encoding:
    try:
        return ENCODINGS[ALIASES[name]]
    except KeyError:
        raise ValueError(f"unknown encoding {name!r}; choose from {sorted(ALIASES)}") from None


def encoding_of(g: Genotype) -> Encoding:
    if isinstance(g, IntegerGenotype):
        return INTEGER
    if isinstance(g, PermutationGenotype):
        return PERMUTATION
    if isinstance(g, RuleTree):
        return CA
    raise TypeError(f"not a genotype: {type(g).__name__}")


def decode(g: Genotype) -> SBox:
    return encoding_of(g).decode(g)


def random_genotype(encoding: str | Encoding, n: int, rng: random.Random) -> Genotype:
    enc = encoding if isinstance(encoding, Encoding) else get_encoding(encoding)
    return enc.random(n, rng)


__all__ = [
    "ALIASES", "CA", "ENCODINGS", "Encoding", "GP_CROSSOVERS", "Genotype", "INTEGER",
    "INT_CROSSOVERS", "IntegerGenotype", "Node", "PERMUTATION", "PERM_CROSSOVERS",
    "PERM_MUTATIONS", "PermutationGenotype", "RuleTree", "decode", "decode_ca_rule",
    "decode_integer", "decode_permutation", "encoding_of", "get_encoding", "gp_crossover",
    "gp_mutate", "int_crossover", "int_mutate", "parse_prefix", "perm_crossover",
    "perm_mutate", "random_genotype",
]

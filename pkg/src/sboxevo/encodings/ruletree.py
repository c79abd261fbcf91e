"""Genetic-programming trees encoding a cellular automaton local rule.

A tree over terminals v0..v(n-1) is a Boolean function. Applied to an n-bit
state, output cell i evaluates the rule with vj bound to input bit
(i + j) mod n, so the whole S-box is obtained by evaluating the tree once
on the bitwise rotations of every input word.

Depth counts levels: a lone terminal has depth 1, and every tree of an
n-bit rule must have depth <= n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from ..sbox import SBox, SBoxError

ARITY = {"NOT": 1, "XOR": 2, "AND": 2, "OR": 2, "NAND": 2, "XNOR": 2, "IF": 3}
FUNCTIONS = tuple(ARITY)
GP_CROSSOVERS = ("simple", "uniform", "size-fair", "one-point", "context-preserving")
MAX_CROSSOVER_TRIES = 10

Path = tuple[int, ...]


@dataclass(frozen=True)
class Node:
    """Immutable tree node; depth, size and the largest terminal index are
    computed once at construction."""

    op: str
    children: tuple["Node", ...] = ()
    depth: int = field(init=False, compare=False, repr=False)
    size: int = field(init=False, compare=False, repr=False)
    max_var: int = field(init=False, compare=False, repr=False)
    # (n, output words) of the last evaluation; subtrees are shared between
    # parents and offspring, so most of a child is already evaluated
    _memo: tuple = field(default=(), init=False, compare=False, repr=False)

    def __post_init__(self):
        kids = self.children
        if self.op in ARITY:
            if len(kids) != ARITY[self.op]:
                raise SBoxError(f"{self.op} expects {ARITY[self.op]} arguments, got {len(kids)}")
            depth = 1 + max(c.depth for c in kids)
            size = 1 + sum(c.size for c in kids)
            max_var = max(c.max_var for c in kids)
        elif self.op[:1] == "v" and self.op[1:].isdigit():
            if kids:
                raise SBoxError(f"terminal {self.op} has children")
            depth, size, max_var = 1, 1, int(self.op[1:])
        else:
            raise SBoxError(f"unknown symbol {self.op!r}")
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "max_var", max_var)

    @property
    def arity(self) -> int:
        return len(self.children)

    def __str__(self):
        return to_prefix(self)


def terminal(j: int) -> Node:
    return Node(f"v{j}")


@dataclass(frozen=True)
class RuleTree:
    n: int
    root: Node

    def __post_init__(self):
        if self.root.max_var >= self.n:
            raise SBoxError(f"terminal v{self.root.max_var} does not exist for n={self.n}")
        if self.root.depth > self.n:
            raise SBoxError(f"tree depth {self.root.depth} exceeds {self.n}")

    def __str__(self):
        return to_prefix(self.root)


# -- serialization -----------------------------------------------------------


def to_prefix(node: Node) -> str:
    return " ".join(n.op for _, n, _ in iter_nodes(node))


def parse_prefix(text: str, n: int) -> RuleTree:
    tokens = text.split()
    pos = 0

    def build() -> Node:
        nonlocal pos
        if pos >= len(tokens):
            raise SBoxError("truncated prefix expression")
        tok = tokens[pos]
        pos += 1
        if tok in ARITY:
            return Node(tok, tuple(build() for _ in range(ARITY[tok])))
        return Node(tok)

    root = build()
    if pos != len(tokens):
        raise SBoxError(f"trailing tokens in {text!r}")
    return RuleTree(n, root)


# -- decoding ----------------------------------------------------------------


def _rotations(n: int) -> list[np.ndarray]:
    s = np.arange(1 << n, dtype=np.uint16)
    # bit i of rotations[j][s] is bit (i + j) mod n of s
    return [((s >> j) | (s << (n - j))) & ((1 << n) - 1) for j in range(n)]


_ROTATIONS: dict[int, list[np.ndarray]] = {}


def _eval(node: Node, n: int, env: list[np.ndarray], mask: int) -> np.ndarray:
    memo = node._memo
    if memo and memo[0] == n:
        return memo[1]
    op = node.op
    if not node.children:
        return env[node.max_var]
    args = [_eval(c, n, env, mask) for c in node.children]
    a = args[0]
    if op == "NOT":
        out = a ^ mask
    elif op == "XOR":
        out = a ^ args[1]
    elif op == "AND":
        out = a & args[1]
    elif op == "OR":
        out = a | args[1]
    elif op == "NAND":
        out = (a & args[1]) ^ mask
    elif op == "XNOR":
        out = a ^ args[1] ^ mask
    else:
        # IF a THEN b ELSE c, bitwise
        out = (a & args[1]) | ((a ^ mask) & args[2])
    out.flags.writeable = False
    object.__setattr__(node, "_memo", (n, out))
    return out


def rule_table(r: RuleTree) -> np.ndarray:
    """S-box lookup table produced by the rule, as a read-only uint16 array."""
    env = _ROTATIONS.get(r.n)
    if env is None:
        env = _ROTATIONS[r.n] = _rotations(r.n)
        for arr in env:
            arr.flags.writeable = False
    return _eval(r.root, r.n, env, (1 << r.n) - 1)


def decode_ca_rule(r: RuleTree) -> SBox:
    return SBox(r.n, tuple(rule_table(r).tolist()))


# -- tree surgery ------------------------------------------------------------


def iter_nodes(node: Node) -> list[tuple[Path, Node, int]]:
    """Preorder (path, node, level) triples; the root is at level 1."""
    out = []
    stack = [((), node, 1)]
    while stack:
        item = stack.pop()
        out.append(item)
        path, nd, level = item
        for k in range(len(nd.children) - 1, -1, -1):
            stack.append((path + (k,), nd.children[k], level + 1))
    return out


def subtree(node: Node, path: Path) -> Node:
    for k in path:
        node = node.children[k]
    return node


def replace(node: Node, path: Path, new: Node) -> Node:
    if not path:
        return new
    k = path[0]
    children = list(node.children)
    children[k] = replace(children[k], path[1:], new)
    return Node(node.op, tuple(children))


# -- generation --------------------------------------------------------------


def grow(n: int, max_depth: int, rng: random.Random, full: bool = False) -> Node:
    """Random tree of depth <= max_depth (exactly max_depth on every branch when full)."""
    if max_depth <= 1:
        return terminal(rng.randrange(n))
    if full:
        op = rng.choice(FUNCTIONS)
    else:
        k = rng.randrange(len(FUNCTIONS) + n)
        if k >= len(FUNCTIONS):
            return terminal(k - len(FUNCTIONS))
        op = FUNCTIONS[k]
    return Node(op, tuple(grow(n, max_depth - 1, rng, full) for _ in range(ARITY[op])))


def random_rule(n: int, rng: random.Random) -> RuleTree:
    """Ramped half-and-half over depths 2..n."""
    depth = rng.randint(2, n)
    return RuleTree(n, grow(n, depth, rng, full=rng.random() < 0.5))


# -- variation ---------------------------------------------------------------


def gp_mutate(r: RuleTree, rng: random.Random) -> RuleTree:
    """Subtree mutation: regrow a uniformly chosen node within the depth bound."""
    nodes = iter_nodes(r.root)
    path, _, level = rng.choice(nodes)
    new = grow(r.n, r.n - level + 1, rng)
    return RuleTree(r.n, replace(r.root, path, new))


def simple_crossover(a: Node, b: Node, rng: random.Random) -> Node:
    path, _, _ = rng.choice(iter_nodes(a))
    _, donor, _ = rng.choice(iter_nodes(b))
    return replace(a, path, donor)


def uniform_crossover(a: Node, b: Node, rng: random.Random) -> Node:
    """Inside the common region swap node labels, at its boundary whole subtrees."""
    take_b = rng.random() < 0.5
    if a.arity and a.arity == b.arity:
        op = b.op if take_b else a.op
        return Node(op, tuple(uniform_crossover(x, y, rng) for x, y in zip(a.children, b.children)))
    return b if take_b else a


def _common_region(a: Node, b: Node, path: Path = ()) -> Iterator[Path]:
    yield path
    if a.arity == b.arity:
        for k, (x, y) in enumerate(zip(a.children, b.children)):
            yield from _common_region(x, y, path + (k,))


def one_point_crossover(a: Node, b: Node, rng: random.Random) -> Node:
    path = rng.choice(list(_common_region(a, b)))
    return replace(a, path, subtree(b, path))


def _shared_paths(a: Node, b: Node, path: Path = ()) -> Iterator[Path]:
    yield path
    for k, (x, y) in enumerate(zip(a.children, b.children)):
        yield from _shared_paths(x, y, path + (k,))


def context_preserving_crossover(a: Node, b: Node, rng: random.Random) -> Node:
    """Swap subtrees rooted at the same coordinates in both parents."""
    path = rng.choice(list(_shared_paths(a, b)))
    return replace(a, path, subtree(b, path))


def size_fair_crossover(a: Node, b: Node, rng: random.Random) -> Node:
    """Donor subtree is restricted to at most 1 + 2 * (size of the removed subtree)."""
    path, cut, _ = rng.choice(iter_nodes(a))
    limit = 1 + 2 * cut.size
    donors = [s for _, s, _ in iter_nodes(b) if s.size <= limit]
    return replace(a, path, rng.choice(donors))


_CROSSOVER_FUNCS = {
    "simple": simple_crossover,
    "uniform": uniform_crossover,
    "size-fair": size_fair_crossover,
    "one-point": one_point_crossover,
    "context-preserving": context_preserving_crossover,
}


def gp_crossover(p1: RuleTree, p2: RuleTree, rng: random.Random,
                 operator: Optional[str] = None) -> RuleTree:
    """Draw offspring until one fits the depth bound, else return p1."""
    if p1.n != p2.n:
        raise SBoxError("parents differ in bit-width")
    operator = operator or rng.choice(GP_CROSSOVERS)
    cross = _CROSSOVER_FUNCS.get(operator)
    if cross is None:
        raise ValueError(f"unknown tree crossover {operator!r}")
    for _ in range(MAX_CROSSOVER_TRIES):
        child = cross(p1.root, p2.root, rng)
        if child.depth <= p1.n:
            return RuleTree(p1.n, child)
    return p1

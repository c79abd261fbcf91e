"""S-box representation, GF(2^n) arithmetic, power maps and affine transforms."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MIN_BITS = 3
MAX_BITS = 10

# bit i of each value is the coefficient of x^i
DEFAULT_POLYS = {
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
}


class SBoxError(ValueError):
    """Raised for malformed S-boxes, fields and affine maps."""


class NotAPermutationError(SBoxError):
    pass


@dataclass(frozen=True)
class SBox:
    """An n x n S-box given by its lookup table."""

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or not MIN_BITS <= self.n <= MAX_BITS:
            raise SBoxError(f"bit-width must be in [{MIN_BITS}, {MAX_BITS}], got {self.n!r}")
        table = tuple(map(int, self.table))
        size = 1 << self.n
        if len(table) != size:
            raise SBoxError(f"table length {len(table)} != 2^{self.n} = {size}")
        lo, hi = min(table), max(table)
        if lo < 0 or hi >= size:
            raise SBoxError(f"entry {hi if hi >= size else lo} outside [0, {size})")
        object.__setattr__(self, "table", table)

    @property
    def size(self) -> int:
        return 1 << self.n

    @cached_property
    def array(self) -> np.ndarray:
        """Read-only int64 view of the table, used by the property kernels."""
        arr = np.asarray(self.table, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    def __len__(self):
        return len(self.table)

    def __getitem__(self, x):
        return self.table[x]


def new_sbox(n: int, table: Iterable[int]) -> SBox:
    return SBox(n, tuple(table))


def identity_sbox(n: int) -> SBox:
    return SBox(n, tuple(range(1 << n)))


def is_permutation(f: SBox) -> bool:
    return len(set(f.table)) == f.size


def missing_outputs(f: SBox) -> int:
    """Number of values in [0, 2^n) never produced by ``f`` (the BAL penalty)."""
    return f.size - len(set(f.table))


def invert(f: SBox) -> SBox:
    if not is_permutation(f):
        raise NotAPermutationError("only permutations can be inverted")
    inv = [0] * f.size
    for x, y in enumerate(f.table):
        inv[y] = x
    return SBox(f.n, tuple(inv))


# -- finite field ------------------------------------------------------------


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, m: int) -> int:
    dm = _poly_degree(m)
    while a and _poly_degree(a) >= dm:
        a ^= m << (_poly_degree(a) - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = _poly_degree(poly)
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, q) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^n) defined by a bit-encoded irreducible polynomial of degree n."""

    n: int
    poly: int

    def __post_init__(self):
        if self.n < 1 or self.n > MAX_BITS:
            raise SBoxError(f"unsupported field size n={self.n}")
        if _poly_degree(self.poly) != self.n:
            raise SBoxError(f"polynomial {self.poly:#x} does not have degree {self.n}")
        if not is_irreducible(self.poly):
            raise SBoxError(f"polynomial {self.poly:#x} is reducible")


def default_field(n: int) -> FieldSpec:
    try:
        return FieldSpec(n, DEFAULT_POLYS[n])
    except KeyError:
        raise SBoxError(f"no default polynomial for n={n}") from None


def gf_mul(fs: FieldSpec, a: int, b: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo the field polynomial."""
    top = 1 << fs.n
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= fs.poly
    return res


def gf_pow(fs: FieldSpec, x: int, d: int) -> int:
    res = 1
    while d:
        if d & 1:
            res = gf_mul(fs, res, x)
        x = gf_mul(fs, x, x)
        d >>= 1
    return res


def power_map(fs: FieldSpec, d: int) -> SBox:
    """x -> x^d over GF(2^n), with 0^0 = 1 and 0^d = 0 for d > 0."""
    if not isinstance(fs, FieldSpec):
        raise SBoxError("power_map needs a FieldSpec")
    size = 1 << fs.n
    if not 0 <= d < size:
        raise SBoxError(f"exponent {d} outside [0, {size})")
    return SBox(fs.n, tuple(gf_pow(fs, x, d) for x in range(size)))


def inverse_map(n: int, fs: FieldSpec | None = None) -> SBox:
    """Field inversion extended by 0 -> 0, i.e. x^(2^n - 2)."""
    fs = fs or default_field(n)
    return power_map(fs, (1 << n) - 2)


def gold_map(n: int, i: int = 1, fs: FieldSpec | None = None) -> SBox:
    """x^(2^i + 1); APN whenever gcd(i, n) = 1."""
    fs = fs or default_field(n)
    return power_map(fs, (1 << i) + 1)


def power_map_is_permutation(n: int, d: int) -> bool:
    return gcd(d, (1 << n) - 1) == 1


# -- affine maps -------------------------------------------------------------


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of a matrix whose rows are bitmasks."""
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


@dataclass(frozen=True)
class AffineMap:
    """x -> M x + c over GF(2)^n.

    ``rows[i]`` is row i of M as a bitmask: output bit i is the parity of
    ``rows[i] & x``.
    """

    n: int
    rows: tuple[int, ...]
    constant: int = 0

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if len(rows) != self.n:
            raise SBoxError(f"matrix needs {self.n} rows, got {len(rows)}")
        mask = (1 << self.n) - 1
        if any(r & ~mask for r in rows) or self.constant & ~mask or self.constant < 0:
            raise SBoxError("matrix row or constant wider than n bits")
        if gf2_rank(rows) != self.n:
            raise SBoxError("affine map matrix is singular")
        object.__setattr__(self, "rows", rows)

    @property
    def matrix(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def __call__(self, x: int) -> int:
        y = self.constant
        for i, r in enumerate(self.rows):
            y ^= _parity(r & x) << i
        return y

    def as_sbox(self) -> SBox:
        return SBox(self.n, tuple(self(x) for x in range(1 << self.n)))


def identity_affine(n: int) -> AffineMap:
    return AffineMap(n, tuple(1 << i for i in range(n)), 0)


def random_affine_permutation(n: int, rng: random.Random) -> AffineMap:
    """Rejection-sample an invertible matrix, then draw a uniform constant."""
    while True:
        rows = tuple(rng.getrandbits(n) for _ in range(n))
        if gf2_rank(rows) == n:
            return AffineMap(n, rows, rng.getrandbits(n))


def apply_affine(a: AffineMap, f: SBox, b: AffineMap) -> SBox:
    """The S-box x -> a(f(b(x)))."""
    if not a.n == f.n == b.n:
        raise SBoxError(f"dimension mismatch: A is {a.n}, F is {f.n}, B is {b.n}")
    return SBox(f.n, tuple(a(f.table[b(x)]) for x in range(f.size)))


# -- text format -------------------------------------------------------------


def format_sbox(f: SBox) -> str:
    width = (f.n + 3) // 4
    return f"n={f.n}\n" + " ".join(f"{v:0{width}x}" for v in f.table) + "\n"


def parse_sbox(text: str) -> SBox:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("n="):
        raise SBoxError("expected 'n=<k>' followed by a line of hex values")
    try:
        n = int(lines[0][2:])
        values = [int(tok, 16) for ln in lines[1:] for tok in ln.split()]
    except ValueError as exc:
        raise SBoxError(f"malformed S-box file: {exc}") from None
    return SBox(n, tuple(values))


def read_sbox(path: str | Path) -> SBox:
    return parse_sbox(Path(path).read_text())


def write_sbox(f: SBox, path: str | Path) -> None:
    Path(path).write_text(format_sbox(f))

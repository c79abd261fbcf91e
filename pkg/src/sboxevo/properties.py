"""Differential and boomerang tables, their uniformities, and algebraic degree."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .sbox import NotAPermutationError, SBox, is_permutation, missing_outputs

DDT = "DDT"
BCT = "BCT"


@dataclass(frozen=True, eq=False)
class CountTable:
    """A 2^n x 2^n table of counts; ``entries[a, b]``."""

    n: int
    entries: np.ndarray
    kind: str

    def __eq__(self, other):
        if not isinstance(other, CountTable):
            return NotImplemented
        return (
            self.n == other.n
            and self.kind == other.kind
            and np.array_equal(self.entries, other.entries)
        )

    def __getitem__(self, ab):
        return int(self.entries[ab])

    def to_csv(self) -> str:
        return "\n".join(",".join(str(int(v)) for v in row) for row in self.entries) + "\n"


@dataclass(frozen=True)
class PropertyReport:
    n: int
    delta: int
    beta: Optional[int]
    bal: int
    degree: int

    def as_dict(self) -> dict:
        return {"n": self.n, "delta": self.delta, "beta": self.beta,
                "bal": self.bal, "degree": self.degree}


@numba.njit(cache=True)
def _ddt_kernel(table):
    size = table.shape[0]
    out = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        for x in range(size):
            out[a, table[x] ^ table[x ^ a]] += 1
    return out


@numba.njit(cache=True)
def _bct_kernel(table, inv):
    # For a fixed a, H(x) = F^-1(F(x) ^ a) ^ x and T[a, b] counts x with
    # H(x) == H(x ^ b). Group x by H(x); every ordered pair inside a group
    # contributes to column x ^ x'.
    size = table.shape[0]
    out = np.zeros((size, size), dtype=np.int64)
    h = np.empty(size, dtype=np.int64)
    counts = np.empty(size + 1, dtype=np.int64)
    order = np.empty(size, dtype=np.int64)
    fill = np.empty(size, dtype=np.int64)
    for a in range(size):
        counts[:] = 0
        for x in range(size):
            v = inv[table[x] ^ a] ^ x
            h[x] = v
            counts[v + 1] += 1
        for v in range(size):
            counts[v + 1] += counts[v]
        fill[:] = counts[:size]
        for x in range(size):
            v = h[x]
            order[fill[v]] = x
            fill[v] += 1
        for v in range(size):
            lo = counts[v]
            hi = counts[v + 1]
            for i in range(lo, hi):
                xi = order[i]
                for j in range(lo, hi):
                    out[a, xi ^ order[j]] += 1
    return out


@numba.njit(cache=True)
def _beta_kernel(table):
    # same bucketing as _bct_kernel, keeping only the running max over a, b != 0;
    # unordered pairs counted twice, the diagonal only feeds column 0.
    # 2^n is the largest possible entry, so stop once it is reached.
    size = table.shape[0]
    inv = np.empty(size, dtype=np.int64)
    for x in range(size):
        inv[table[x]] = x
    row = np.zeros(size, dtype=np.int64)
    h = np.empty(size, dtype=np.int64)
    counts = np.zeros(size + 1, dtype=np.int64)
    order = np.empty(size, dtype=np.int64)
    fill = np.empty(size, dtype=np.int64)
    best = 0
    for a in range(1, size):
        for v in range(size + 1):
            counts[v] = 0
        for b in range(size):
            row[b] = 0
        for x in range(size):
            v = inv[table[x] ^ a] ^ x
            h[x] = v
            counts[v + 1] += 1
        for v in range(size):
            counts[v + 1] += counts[v]
            fill[v] = counts[v]
        for x in range(size):
            v = h[x]
            order[fill[v]] = x
            fill[v] += 1
        for v in range(size):
            lo = counts[v]
            hi = counts[v + 1]
            if hi - lo < 2:
                continue
            for i in range(lo, hi):
                xi = order[i]
                for j in range(i + 1, hi):
                    row[xi ^ order[j]] += 2
        for b in range(1, size):
            if row[b] > best:
                best = row[b]
        if best == size:
            break
    return best


@numba.njit(cache=True)
def _delta_kernel(table):
    size = table.shape[0]
    row = np.empty(size, dtype=np.int64)
    best = 0
    for a in range(1, size):
        row[:] = 0
        for x in range(size):
            row[table[x] ^ table[x ^ a]] += 1
        for b in range(size):
            if row[b] > best:
                best = row[b]
    return best


def _inverse_array(f: SBox) -> np.ndarray:
    inv = np.empty(f.size, dtype=np.int64)
    inv[f.array] = np.arange(f.size, dtype=np.int64)
    return inv


def _require_permutation(f: SBox) -> None:
    if not is_permutation(f):
        raise NotAPermutationError("the BCT is only defined for permutations")


def ddt(f: SBox) -> CountTable:
    return CountTable(f.n, _ddt_kernel(f.array), DDT)


def delta_uniformity(f: SBox) -> int:
    return int(_delta_kernel(f.array))


def bct_naive(f: SBox) -> CountTable:
    """Direct triple loop over (a, b, x); O(2^3n). Kept as a test oracle."""
    _require_permutation(f)
    F = f.table
    Finv = [0] * f.size
    for x, y in enumerate(F):
        Finv[y] = x
    size = f.size
    entries = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            count = 0
            for x in range(size):
                if Finv[F[x] ^ a] ^ Finv[F[x ^ b] ^ a] == b:
                    count += 1
            entries[a, b] = count
    return CountTable(f.n, entries, BCT)


def bct_fast(f: SBox) -> CountTable:
    _require_permutation(f)
    return CountTable(f.n, _bct_kernel(f.array, _inverse_array(f)), BCT)


def boomerang_uniformity(f: SBox) -> int:
    _require_permutation(f)
    return int(_beta_kernel(f.array))


def anf_words(f: SBox) -> np.ndarray:
    """Binary Moebius transform applied to all coordinates at once.

    Bit i of ``result[u]`` is the ANF coefficient of the monomial x^u in
    coordinate function i.
    """
    a = f.array.copy()
    step = 1
    while step < f.size:
        a = a.reshape(-1, 2, step)
        a[:, 1, :] ^= a[:, 0, :]
        a = a.reshape(-1)
        step <<= 1
    return a


def algebraic_degree(f: SBox) -> int:
    coeffs = anf_words(f)
    degrees = [bin(u).count("1") for u in np.flatnonzero(coeffs)]
    return max(degrees, default=0)


def property_report(f: SBox) -> PropertyReport:
    bal = missing_outputs(f)
    beta = boomerang_uniformity(f) if bal == 0 else None
    return PropertyReport(f.n, delta_uniformity(f), beta, bal, algebraic_degree(f))

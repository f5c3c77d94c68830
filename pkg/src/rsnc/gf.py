"""Small finite fields and incremental rank tracking for random linear coding."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# primitive polynomials for GF(2^k), k = 1..8
_POLY = {1: 0b11, 2: 0b111, 3: 0b1011, 4: 0b10011, 5: 0b100101,
         6: 0b1000011, 7: 0b10001001, 8: 0b100011101}


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q ** 0.5) + 1))


@lru_cache(maxsize=None)
def _binary_tables(k: int):
    q = 1 << k
    poly = _POLY[k]
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            x, y, acc = a, b, 0
            while y:
                if y & 1:
                    acc ^= x
                y >>= 1
                x <<= 1
                if x & q:
                    x ^= poly
            mul[a, b] = acc
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    return mul, inv


class GaloisField:
    """GF(p) for prime p, or GF(2^k) for k <= 8."""

    def __init__(self, size: int):
        self.size = size
        if _is_prime(size):
            self.binary = False
        elif size >= 2 and size & (size - 1) == 0 and size.bit_length() - 1 in _POLY:
            self.binary = True
            self._mul, self._inv = _binary_tables(size.bit_length() - 1)
        else:
            raise ValueError(f"unsupported field size {size}")

    def random_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, self.size, n, dtype=np.int64)

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.binary:
            return int(self._inv[a])
        return pow(int(a), self.size - 2, self.size)

    def scale(self, c: int, v: np.ndarray) -> np.ndarray:
        if self.binary:
            return self._mul[c, v]
        return (c * v) % self.size

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.binary:
            return a ^ b
        return (a - b) % self.size


class RankTracker:
    """Row-reduced basis of received coefficient vectors."""

    def __init__(self, field: GaloisField, n: int):
        self.field = field
        self.n = n
        self.rows: dict[int, np.ndarray] = {}  # pivot column -> row with 1 at pivot

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, v) -> bool:
        """Insert a vector; True when it was innovative."""
        f = self.field
        v = np.array(v, dtype=np.int64) % f.size
        for col, row in self.rows.items():
            if v[col]:
                v = f.sub(v, f.scale(int(v[col]), row))
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        col = int(nz[0])
        v = f.scale(f.inverse(int(v[col])), v)
        for c, row in self.rows.items():
            if row[col]:
                self.rows[c] = f.sub(row, f.scale(int(row[col]), v))
        self.rows[col] = v
        return True

    def add_unit(self, j: int) -> bool:
        e = np.zeros(self.n, dtype=np.int64)
        e[j] = 1
        return self.add(e)

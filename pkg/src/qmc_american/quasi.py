"""Scrambled Halton streams.

Each dimension ``d`` carries the radical-inverse sequence in the d-th prime
base, indices ``1..length`` (index 0 maps to 0 and is skipped).  The order in
which the points are handed to paths is shuffled per dimension by a
permutation driven from a 64-bit LCG, which breaks the cross-dimension
correlation plain Halton has for neighbouring large bases while leaving each
dimension's one-dimensional point set untouched.

The value at ``(path, dim)`` depends only on ``(seed, dims, length, path,
dim)``, so any block of paths can be generated independently.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import moro_inv_cnd
from .errors import DomainError

__all__ = [
    "LCG_MULTIPLIER",
    "LCG_INCREMENT",
    "EPSILON",
    "QuasiStream",
    "first_primes",
    "radical_inverse",
    "lcg_states",
    "lcg_permutation",
    "lcg_permute",
    "uniform_matrix",
    "to_normal",
    "quasi_stream",
    "clear_stream_cache",
]

# Knuth's MMIX constants: full period 2**64 (c odd, a - 1 divisible by 4).
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
EPSILON = 1e-12

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def first_primes(count: int) -> list[int]:
    if count < 1:
        return []
    limit = max(16, int(count * (math.log(count + 1) + math.log(math.log(count + 2)) + 3)))
    while True:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(limit**0.5) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        primes = np.flatnonzero(sieve)
        if len(primes) >= count:
            return [int(p) for p in primes[:count]]
        limit *= 2


def _digit_count(n: int, base: int) -> int:
    digits = 0
    while n > 0:
        n //= base
        digits += 1
    return max(digits, 1)


def radical_inverse(indices: np.ndarray, base: int, digits: int | None = None) -> np.ndarray:
    """Van der Corput radical inverse of non-negative integer ``indices``.

    ``digits`` fixes the number of digit passes so the floating-point
    operation sequence for an index does not depend on what else is in the
    array.
    """
    idx = np.asarray(indices, dtype=np.int64).copy()
    if digits is None:
        digits = _digit_count(int(idx.max(initial=0)), base)
    out = np.zeros(idx.shape, dtype=np.float64)
    scale = 1.0 / base
    for _ in range(digits):
        idx, digit = np.divmod(idx, base)
        out += scale * digit
        scale /= base
    return out


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; a bijection on uint64 so distinct inputs stay distinct
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def lcg_states(count: int, seed: int) -> np.ndarray:
    """First ``count`` states of the LCG started from ``seed`` (mod 2**64).

    Built by doubling: the block ``[L, 2L)`` is the block ``[0, L)`` advanced
    by ``L`` steps, ``x -> a**L x + c (a**L - 1)/(a - 1)``.
    """
    if count < 1:
        raise DomainError("lcg_states needs count >= 1")
    states = np.empty(count, dtype=np.uint64)
    states[0] = seed & _MASK64
    mult, inc = LCG_MULTIPLIER, LCG_INCREMENT  # jump by `filled` steps
    filled = 1
    with np.errstate(over="ignore"):
        while filled < count:
            take = min(filled, count - filled)
            states[filled : filled + take] = states[:take] * np.uint64(mult) + np.uint64(inc)
            filled += take
            inc = (mult * inc + inc) & _MASK64
            mult = (mult * mult) & _MASK64
    return states


def lcg_permutation(length: int, seed: int) -> np.ndarray:
    """Index permutation of ``range(length)`` ordered by mixed LCG keys.

    A full-period LCG never repeats a state inside its period, so the keys
    are distinct and the ordering is a well-defined bijection.
    """
    keys = _mix64(lcg_states(length, seed))
    perm = np.argsort(keys, kind="stable")
    return perm.astype(np.int32 if length < 2**31 else np.int64)


def lcg_permute(array, seed: int) -> np.ndarray:
    arr = np.asarray(array)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("lcg_permute needs a non-empty one-dimensional array")
    return arr[lcg_permutation(arr.size, seed)]


def dimension_seed(seed: int, dim: int) -> int:
    return _splitmix64((seed & _MASK64) ^ _splitmix64(dim + 1))


class _PermutationCache:
    """Byte-bounded LRU of read-only permutation tables keyed by (length, seed, dim).

    A table depends only on its key, so streams with different dimension
    counts share their leading tables.
    """

    def __init__(self, budget_bytes: int):
        self.budget = budget_bytes
        self._tables: OrderedDict[tuple[int, int, int], np.ndarray] = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()

    def get(self, length: int, seed: int, dim: int) -> np.ndarray:
        key = (length, seed, dim)
        with self._lock:
            table = self._tables.get(key)
            if table is not None:
                self._tables.move_to_end(key)
                return table
        table = lcg_permutation(length, dimension_seed(seed, dim))
        table.setflags(write=False)
        with self._lock:
            if key not in self._tables:
                self._tables[key] = table
                self._bytes += table.nbytes
            while self._bytes > self.budget and len(self._tables) > 1:
                _, old = self._tables.popitem(last=False)
                self._bytes -= old.nbytes
        return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()
            self._bytes = 0


_PERMUTATIONS = _PermutationCache(256 * 2**20)


def clear_stream_cache() -> None:
    _PERMUTATIONS.clear()


@dataclass(frozen=True)
class QuasiStream:
    """A scrambled Halton matrix of ``length`` paths by ``dimensions`` steps.

    Column ``d`` is identical in every stream with the same ``length`` and
    ``seed`` and more than ``d`` dimensions.
    """

    dimensions: int
    length: int
    seed: int
    bases: tuple[int, ...] = field(init=False)
    digits: tuple[int, ...] = field(init=False)
    permutations: tuple[np.ndarray, ...] = field(init=False, repr=False)
    lanes: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.dimensions < 1 or self.length < 1:
            raise DomainError(
                f"QuasiStream needs dimensions >= 1 and length >= 1, "
                f"got dimensions={self.dimensions}, length={self.length}"
            )
        if not 0 <= self.seed <= _MASK64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        bases = tuple(first_primes(self.dimensions))
        # smallest point is base**-digits and the largest 1 - base**-digits
        worst = max(_digit_count(self.length, b) * math.log(b) for b in bases)
        if worst > -math.log(EPSILON):
            raise DomainError(
                f"length {self.length} with {self.dimensions} dimensions would emit "
                f"uniforms closer than {EPSILON} to 0 or 1"
            )
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "digits", tuple(_digit_count(self.length, b) for b in bases))

        def build(dim: int) -> np.ndarray:
            return _PERMUTATIONS.get(self.length, self.seed, dim)

        dims = range(self.dimensions)
        if self.lanes > 1 and self.dimensions > 1:
            with ThreadPoolExecutor(max_workers=min(self.lanes, self.dimensions)) as pool:
                perms = tuple(pool.map(build, dims))
        else:
            perms = tuple(build(d) for d in dims)
        object.__setattr__(self, "permutations", perms)

    def uniforms(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Rows ``start:stop`` of the uniform matrix, shape (rows, dimensions)."""
        stop = self.length if stop is None else stop
        if not 0 <= start < stop <= self.length:
            raise DomainError(f"row range [{start}, {stop}) outside [0, {self.length})")
        out = np.empty((stop - start, self.dimensions), dtype=np.float64)
        for d, (base, digits, perm) in enumerate(zip(self.bases, self.digits, self.permutations)):
            out[:, d] = radical_inverse(perm[start:stop].astype(np.int64) + 1, base, digits)
        return out

    def normals(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        return moro_inv_cnd(self.uniforms(start, stop))


def quasi_stream(dimensions: int, length: int, seed: int, lanes: int = 1) -> QuasiStream:
    return QuasiStream(dimensions, length, seed, lanes=lanes)


def uniform_matrix(dimensions: int, length: int, seed: int) -> np.ndarray:
    """Full ``length x dimensions`` matrix of scrambled Halton uniforms."""
    return quasi_stream(dimensions, length, seed).uniforms()


def to_normal(uniforms) -> np.ndarray:
    """Entrywise Moro inversion, shape preserved."""
    arr = np.asarray(uniforms, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("to_normal requires every entry strictly inside (0, 1)")
    return np.asarray(moro_inv_cnd(arr))

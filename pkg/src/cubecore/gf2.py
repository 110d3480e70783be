"""Exact linear algebra over GF(2): words, subgroups, cosets and linear maps.

Words are elements of Z2^n packed into the low n bits of a Python int
(bit i holds the coefficient of the basis vector e_{i+1}).  All string
renderings are little-endian: "1101" means e1 + e2 + e4.  Everything here
is immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, DimensionMismatch

ENUMERATION_CAP = 25  # max subgroup rank enumerate_subgroup will expand


def parity(bits: int) -> int:
    """Parity of the number of set bits."""
    return bits.bit_count() & 1


@dataclass(frozen=True, slots=True)
class Word:
    """An element of Z2^n.

    The packed representation targets n <= 64; Python ints make any wider
    n behave identically, so no hard bound is enforced.
    """

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"dimension must be nonnegative, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits 0x{self.bits:x} out of range for n={self.n}")

    @classmethod
    def zero(cls, n: int) -> "Word":
        return cls(n, 0)

    @classmethod
    def basis(cls, n: int, i: int) -> "Word":
        """e_{i+1}: the word with only bit i set (0-based index)."""
        if not 0 <= i < n:
            raise ValueError(f"basis index {i} out of range for n={n}")
        return cls(n, 1 << i)

    @classmethod
    def from_string(cls, s: str) -> "Word":
        """Parse a little-endian bitstring, e.g. "1101" = e1+e2+e4."""
        if not s or any(c not in "01" for c in s):
            raise ValueError(f"not a bitstring: {s!r}")
        bits = 0
        for i, c in enumerate(s):
            if c == "1":
                bits |= 1 << i
        return cls(len(s), bits)

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __str__(self) -> str:
        return self.to_string()

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __add__(self, other: "Word") -> "Word":
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} != {other.n}")
        return Word(self.n, self.bits ^ other.bits)

    __xor__ = __add__

    def __int__(self) -> int:
        return self.bits


def _rref(rows: Iterable[int], n: int) -> tuple[int, ...]:
    """Reduced row echelon form over GF(2); pivots = lowest set bits, increasing."""
    basis: list[int] = []  # kept fully reduced at all times
    for row in rows:
        for b in basis:
            if (row >> _lowbit(b)) & 1:
                row ^= b
        if row:
            for i, b in enumerate(basis):
                if (b >> _lowbit(row)) & 1:
                    basis[i] = b ^ row
            basis.append(row)
    basis.sort(key=_lowbit)
    return tuple(basis)


def _lowbit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _reduce(bits: int, basis: Sequence[int]) -> int:
    for row in basis:
        if (bits >> _lowbit(row)) & 1:
            bits ^= row
    return bits


@dataclass(frozen=True, slots=True)
class Subgroup:
    """A subgroup of Z2^n held as an RREF basis (pivot columns increasing)."""

    n: int
    basis: tuple[int, ...]

    def __post_init__(self):
        if _rref(self.basis, self.n) != self.basis:
            raise ValueError("basis is not in reduced row echelon form")
        if any(not 0 < b < (1 << self.n) for b in self.basis):
            raise ValueError("basis rows out of range")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    def contains_bits(self, bits: int) -> bool:
        return _reduce(bits, self.basis) == 0

    def __contains__(self, w: Word) -> bool:
        if w.n != self.n:
            raise DimensionMismatch(f"{w.n} != {self.n}")
        return self.contains_bits(w.bits)


def span(words: Sequence[Word], n: int | None = None) -> Subgroup:
    """Subgroup generated by the given words, as a canonical RREF basis.

    `n` is required when `words` is empty (the dimension cannot be inferred).
    """
    dims = {w.n for w in words}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    if dims:
        if n is not None and n not in dims:
            raise DimensionMismatch(f"words have n={dims.pop()}, expected {n}")
        n = dims.pop() if n is None else n
    elif n is None:
        raise ValueError("empty span needs an explicit dimension")
    return Subgroup(n, _rref((w.bits for w in words), n))


def span_bits(rows: Iterable[int], n: int) -> Subgroup:
    """Like span() but on raw ints."""
    return Subgroup(n, _rref(rows, n))


def coset_canonical(w: Word, subgroup: Subgroup) -> Word:
    """Canonical representative of w + H: reduce w against H's RREF basis.

    Two words get the same output iff they lie in the same coset.
    """
    if w.n != subgroup.n:
        raise DimensionMismatch(f"{w.n} != {subgroup.n}")
    return Word(w.n, _reduce(w.bits, subgroup.basis))


def coset_canonical_bits(bits: int, subgroup: Subgroup) -> int:
    return _reduce(bits, subgroup.basis)


def enumerate_subgroup(subgroup: Subgroup) -> Iterator[Word]:
    """Yield all 2^rank elements exactly once.

    Order: element with index i is the XOR of the basis rows selected by the
    bits of i, for i = 0, 1, ..., 2^rank - 1 (deterministic; index 0 is zero).
    """
    if subgroup.rank > ENUMERATION_CAP:
        raise CapacityError(f"rank {subgroup.rank} exceeds cap {ENUMERATION_CAP}")
    for i in range(1 << subgroup.rank):
        bits = 0
        m = i
        j = 0
        while m:
            if m & 1:
                bits ^= subgroup.basis[j]
            m >>= 1
            j += 1
        yield Word(subgroup.n, bits)


@dataclass(frozen=True, slots=True)
class LinearMap:
    """Linear map Z2^d -> Z2^n given by the images of the standard basis."""

    domain_dim: int
    codomain_dim: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.domain_dim:
            raise ValueError("need one image per basis vector")
        if any(not 0 <= x < (1 << self.codomain_dim) for x in self.images):
            raise ValueError("image out of codomain range")

    def apply_bits(self, bits: int) -> int:
        out = 0
        m = bits
        while m:
            b = m & -m
            out ^= self.images[b.bit_length() - 1]
            m ^= b
        return out

    def apply(self, w: Word) -> Word:
        if w.n != self.domain_dim:
            raise DimensionMismatch(f"{w.n} != {self.domain_dim}")
        return Word(self.codomain_dim, self.apply_bits(w.bits))

    def kernel(self) -> Subgroup:
        """Kernel as a subgroup of the domain."""
        # Gaussian elimination on (image | e_i) pairs: track preimages.
        pairs = [(self.images[i], 1 << i) for i in range(self.domain_dim)]
        basis: list[tuple[int, int]] = []
        kernel_rows = []
        for img, pre in pairs:
            for bimg, bpre in basis:
                if bimg and (img >> _lowbit(bimg)) & 1:
                    img ^= bimg
                    pre ^= bpre
            if img:
                basis.append((img, pre))
            else:
                kernel_rows.append(pre)
        return span_bits(kernel_rows, self.domain_dim)


def linear_extend(images: Sequence[Word]) -> LinearMap:
    """Linear map sending e_{i+1} to images[i]."""
    dims = {w.n for w in images}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed codomain dimensions {sorted(dims)}")
    codim = dims.pop() if dims else 0
    return LinearMap(len(images), codim, tuple(w.bits for w in images))


def max_subgroup_within(words: Iterable[Word], n: int | None = None) -> Subgroup:
    """Largest subgroup of Z2^n all of whose nonzero elements lie in `words`.

    Exhaustive depth-first search over closure-respecting basis extensions.
    Ties broken toward the lexicographically first basis found.
    """
    allowed = set()
    for w in words:
        if n is None:
            n = w.n
        elif w.n != n:
            raise DimensionMismatch(f"{w.n} != {n}")
        if w.bits:
            allowed.add(w.bits)
    if n is None:
        raise ValueError("empty word set needs an explicit dimension")
    candidates = sorted(allowed)
    best: list[int] = []

    def extend(elements: set[int], basis: list[int], start: int) -> None:
        nonlocal best
        if len(basis) > len(best):
            best = list(basis)
        for idx in range(start, len(candidates)):
            c = candidates[idx]
            if c in elements:
                continue
            new = {c ^ h for h in elements}
            if new <= allowed | {0} and all(x in allowed for x in new):
                extend(elements | new, basis + [c], idx + 1)

    extend({0}, [], 0)
    return span_bits(best, n)

"""Gapsets, Kunz coordinates and the invariants derived from them.

A gapset is stored as an integer bit mask: bit ``z`` is set iff ``z`` is a
gap.  Kunz tuples are plain tuples of ints ``(k_1, ..., k_{m-1})``; the
empty tuple is the Kunz tuple of the empty gapset (multiplicity 1).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

KunzTuple = tuple[int, ...]
AperySet = tuple[int, ...]
CanonicalPartition = tuple[frozenset[int], ...]


class GapsetError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidGapsetError(GapsetError):
    def __init__(self, z: int, x: int, y: int):
        self.z, self.x, self.y = z, x, y
        super().__init__(f"not a gapset: {z} = {x} + {y} but {x} and {y} are not gaps")


class KunzViolation(NamedTuple):
    """First failing pair of the Kunz inequality system.

    ``target`` is the index on the right-hand side; ``wrap`` is True for the
    ``k_i + k_j + 1 >= k_{i+j-m}`` family.
    """

    i: int
    j: int
    target: int
    wrap: bool
    lhs: int
    rhs: int

    def describe(self) -> str:
        if self.wrap:
            return (f"k_{self.i} + k_{self.j} + 1 = {self.lhs} < {self.rhs} = k_{self.target}")
        return f"k_{self.i} + k_{self.j} = {self.lhs} < {self.rhs} = k_{self.target}"


class InvalidKunzTupleError(GapsetError):
    def __init__(self, coords: KunzTuple, violation: KunzViolation):
        self.coords = coords
        self.violation = violation
        super().__init__(
            f"{format_kunz(coords)} is not a Kunz tuple: (i={violation.i}, j={violation.j}) "
            f"{violation.describe()}"
        )


class UndefinedInvariantError(GapsetError):
    """Raised for ratio/level of a gapset of multiplicity 1."""


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask_of(values: Iterable[int]) -> int:
    mask = 0
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise GapsetError(f"gaps must be positive integers, got {v!r}")
        mask |= 1 << v
    return mask


def _closure_witness(mask: int) -> tuple[int, int, int] | None:
    if not mask:
        return None
    top = mask.bit_length() - 1
    window = (1 << (top + 1)) - 2  # bits 1..top
    nongaps = window & ~mask
    best = None
    # a + b lands on a gap with both summands non-gaps
    for a in _bits(nongaps):
        if 2 * a > top:
            break
        hits = (nongaps << a) & mask
        if hits:
            z = (hits & -hits).bit_length() - 1
            if best is None or z < best[0]:
                best = (z, a, z - a)
    return best


def gapset_witness(candidate: Iterable[int]) -> tuple[int, int, int] | None:
    """Smallest ``(z, x, y)`` with ``z = x + y`` in the set and ``x, y`` outside it."""
    return _closure_witness(_mask_of(candidate))


def is_gapset(candidate: Iterable[int]) -> bool:
    return _closure_witness(_mask_of(candidate)) is None


@dataclass(frozen=True, order=False)
class Gapset:
    """Immutable gapset.  Build with ``Gapset.of(...)`` or ``Gapset.from_kunz(...)``."""

    mask: int = 0

    def __post_init__(self):
        if self.mask & 1 or self.mask < 0:
            raise GapsetError("gap mask must only contain positive integers")
        g = self.mask.bit_count()
        # Frobenius bound: max(G) <= 2g - 1
        assert self.mask.bit_length() - 1 <= max(2 * g - 1, 0), self

    @classmethod
    def of(cls, gaps: Iterable[int] = ()) -> Gapset:
        mask = _mask_of(gaps)
        witness = _closure_witness(mask)
        if witness is not None:
            raise InvalidGapsetError(*witness)
        return cls(mask)

    @classmethod
    def from_kunz(cls, coords: Iterable[int]) -> Gapset:
        return gapset_from_kunz(coords)

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __contains__(self, z: object) -> bool:
        return isinstance(z, int) and z > 0 and bool(self.mask >> z & 1)

    def __iter__(self):
        return iter(self.gaps)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __lt__(self, other: Gapset) -> bool:
        return self.gaps < other.gaps

    def __str__(self) -> str:
        return ",".join(map(str, self.gaps))

    def __repr__(self) -> str:
        return f"Gapset({{{self}}})"

    @property
    def genus(self) -> int:
        return self.mask.bit_count()

    @property
    def multiplicity(self) -> int:
        # lowest unset bit above bit 0
        inv = ~(self.mask | 1)
        return (inv & -inv).bit_length() - 1

    @property
    def conductor(self) -> int:
        return self.mask.bit_length() if self.mask else 0

    @property
    def frobenius(self) -> int:
        return self.mask.bit_length() - 1 if self.mask else -1

    @property
    def depth(self) -> int:
        return -(-self.conductor // self.multiplicity)

    @property
    def ratio(self) -> int:
        """Smallest non-gap not divisible by the multiplicity."""
        m = self.multiplicity
        if m == 1:
            raise UndefinedInvariantError("ratio is only defined for multiplicity > 1")
        x = m + 1
        while x in self or x % m == 0:
            x += 1
        return x

    @property
    def level(self) -> int:
        return self.ratio // self.multiplicity

    def apery_set(self) -> AperySet:
        m = self.multiplicity
        top = [0] * m
        for z in self.gaps:
            top[z % m] = z
        return (0,) + tuple(m + top[i] for i in range(1, m))

    def kunz(self) -> KunzTuple:
        m = self.multiplicity
        counts = [0] * m
        for z in self.gaps:
            counts[z % m] += 1
        return tuple(counts[1:])

    def canonical_partition(self) -> CanonicalPartition:
        """Blocks ``G ∩ [a*m + 1, (a+1)*m - 1]`` for ``a = 0 .. depth-1``.

        The empty gapset has depth 0 and therefore no blocks.
        """
        m = self.multiplicity
        blocks: list[set[int]] = [set() for _ in range(self.depth)]
        for z in self.gaps:
            blocks[z // m].add(z)
        return tuple(frozenset(b) for b in blocks)


def kunz_violation(coords: Iterable[int]) -> KunzViolation | None:
    """First (lexicographic in ``(i, j)``) violated inequality, or None."""
    k = (0,) + tuple(coords)
    m = len(k)
    for i in range(1, m):
        if k[i] < 1:
            raise GapsetError(f"Kunz coordinates must be >= 1, got {k[i]} at index {i}")
    for i in range(1, m):
        ki = k[i]
        for j in range(i, m):
            s = i + j
            if s < m:
                if ki + k[j] < k[s]:
                    return KunzViolation(i, j, s, False, ki + k[j], k[s])
            elif s > m:
                t = s - m
                if ki + k[j] + 1 < k[t]:
                    return KunzViolation(i, j, t, True, ki + k[j] + 1, k[t])
    return None


def check_kunz_system(coords: Iterable[int]) -> bool:
    return kunz_violation(coords) is None


def gapset_from_kunz(coords: Iterable[int]) -> Gapset:
    coords = tuple(coords)
    violation = kunz_violation(coords)
    if violation is not None:
        raise InvalidKunzTupleError(coords, violation)
    m = len(coords) + 1
    mask = 0
    for i, k in enumerate(coords, start=1):
        for a in range(k):
            mask |= 1 << (i + a * m)
    return Gapset(mask)


def gamma_prime_levels(G: Gapset) -> range | None:
    """All levels ``l`` with every Kunz coordinate of G inside ``[l, 2l + 1]``.

    Returns None for the empty gapset, which belongs to every family.
    """
    k = G.kunz()
    if not k:
        return None
    lo, hi = min(k), max(k)
    return range(max(1, hi // 2), lo + 1)  # smallest l with 2l + 1 >= hi is hi // 2


_KUNZ_RE = re.compile(r"^\(?\s*(\d+(\s*,\s*\d+)*)?\s*,?\s*\)?$")


def format_kunz(coords: Iterable[int]) -> str:
    return "(" + ",".join(map(str, coords)) + ")"


def parse_kunz(text: str) -> KunzTuple:
    text = text.strip()
    if not _KUNZ_RE.match(text):
        raise GapsetError(f"cannot parse Kunz tuple {text!r}")
    body = text.strip("()").strip()
    return tuple(int(t) for t in body.split(",") if t.strip()) if body else ()


def parse_gaps(text: str) -> tuple[int, ...]:
    body = text.strip().strip("{}").strip()
    if not body:
        return ()
    try:
        return tuple(int(t) for t in body.split(","))
    except ValueError:
        raise GapsetError(f"cannot parse gap list {text!r}") from None

"""Enumerating gapsets by genus and counting the families n_g and n'_{g,l}.

Two independent routes are kept side by side:

* the gapset tree (``enumerate_gapsets``), which adjoins one gap at a time
  starting from the empty gapset, and
* the Kunz-coordinate search (``enumerate_kunz`` / ``enumerate_gamma_prime``
  and the band counter in ``_band``), which works on coordinate tuples.

``enumerate_gapsets_naive`` is a brute-force oracle for both.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator

from . import _band
from ._band import BudgetExceededError
from .core import Gapset, GapsetError, KunzTuple, _closure_witness

NAIVE_MAX_GENUS = 14
STRATEGIES = ("kunz", "gapset")


class GenusTooLargeError(GapsetError):
    pass


def code_version() -> str:
    """Hash of the sources that determine counts; keys the count cache."""
    h = hashlib.sha256()
    here = Path(__file__).parent
    for name in ("core.py", "enumeration.py", "_band.py"):
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


# -- brute force ------------------------------------------------------------

def enumerate_gapsets_naive(g: int) -> list[Gapset]:
    """All gapsets of genus ``g`` by filtering every ``g``-subset of ``[1, 2g-1]``."""
    if g < 0:
        raise ValueError("genus must be >= 0")
    if g > NAIVE_MAX_GENUS:
        raise GenusTooLargeError(f"brute force limited to genus <= {NAIVE_MAX_GENUS}")
    if g == 0:
        return [Gapset()]
    out = []
    for combo in combinations(range(1, 2 * g), g):
        mask = 0
        for z in combo:
            mask |= 1 << z
        if _closure_witness(mask) is None:
            out.append(Gapset(mask))
    return out


# -- gapset tree ------------------------------------------------------------

def _children(mask: int, m: int, frob: int) -> list[tuple[int, int, int]]:
    """Children of a tree node: adjoin a minimal generator larger than every gap."""
    if mask == 0:
        return [(0b10, 2, 1)]
    hi = frob + m
    window = (1 << (hi + 1)) - 2
    nongaps = window & ~mask
    sums = 0
    rest = nongaps
    while rest:
        low = rest & -rest
        a = low.bit_length() - 1
        if a > frob:
            break
        sums |= nongaps << a
        rest ^= low
    fresh = nongaps & ~sums & ~((1 << (frob + 1)) - 1)
    out = []
    while fresh:
        low = fresh & -fresh
        x = low.bit_length() - 1
        fresh ^= low
        new_m = m + 1 if x == m else m
        out.append((mask | low, new_m, x))
    return out


def _walk_tree(node, levels_left: int, budget: list[int] | None = None) -> Iterator[int]:
    stack = [(node, levels_left)]
    while stack:
        (mask, m, frob), left = stack.pop()
        if left == 0:
            yield mask
            continue
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceededError("gapset tree search exceeded budget")
        for child in reversed(_children(mask, m, frob)):
            stack.append((child, left - 1))


_ROOT = (0, 1, 0)


def enumerate_gapsets(g: int) -> Iterator[Gapset]:
    """Stream every gapset of genus ``g`` exactly once (depth-first tree order)."""
    if g < 0:
        raise ValueError("genus must be >= 0")
    for mask in _walk_tree(_ROOT, g):
        yield Gapset(mask)


def _frontier(g: int, depth: int):
    layer = [_ROOT]
    for _ in range(depth):
        layer = [c for node in layer for c in _children(*node)]
    return layer


def _count_subtree(args) -> int:
    node, left = args
    return sum(1 for _ in _walk_tree(node, left))


def count_n(g: int, jobs: int = 1, budget: int | None = None) -> int:
    """Number of gapsets of genus ``g``."""
    if g < 0:
        raise ValueError("genus must be >= 0")
    if jobs <= 1 or g < 12:
        box = None if budget is None else [budget]
        return sum(1 for _ in _walk_tree(_ROOT, g, box))
    from concurrent.futures import ProcessPoolExecutor

    split = 8
    tasks = [(node, g - split) for node in _frontier(g, split)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_count_subtree, tasks, chunksize=4))


# -- Kunz search --------------------------------------------------------------

def _kunz_search(g: int, lo: int, hi: int, length: int) -> Iterator[KunzTuple]:
    """Tuples of ``length`` entries in ``[lo, hi]`` summing to ``g`` that satisfy
    the Kunz system; left to right, values ascending, pruned on prefixes."""
    m = length + 1
    k = [0] * m  # k[0] unused

    def extend(t: int, remaining: int) -> Iterator[KunzTuple]:
        slots_after = length - t
        v_lo = max(lo, remaining - slots_after * hi)
        v_hi = min(hi, remaining - slots_after * lo)
        for v in range(v_lo, v_hi + 1):
            ok = True
            # k_i + k_j >= k_t for i + j = t
            for i in range(1, t // 2 + 1):
                if k[i] + k[t - i] < v:
                    ok = False
                    break
            if ok:
                # k_i + k_t + 1 >= k_{i+t-m} for i <= t, i + t > m
                for i in range(max(1, m - t + 1), t + 1):
                    w = v if i == t else k[i]
                    if w + v + 1 < k[i + t - m]:
                        ok = False
                        break
            if not ok:
                continue
            k[t] = v
            if t == length:
                yield tuple(k[1:])
            else:
                yield from extend(t + 1, remaining - v)
        k[t] = 0

    if length == 0:
        if g == 0:
            yield ()
        return
    yield from extend(1, g)


def enumerate_kunz(g: int, lo: int = 1, hi: int | None = None) -> Iterator[KunzTuple]:
    """Kunz tuples with coordinate sum ``g`` and entries in ``[lo, hi]``,
    ordered by length then lexicographically."""
    if g < 0:
        return
    if hi is None:
        hi = max(g, 1)
    if g == 0:
        yield ()
        return
    for length in range(-(-g // hi), g // lo + 1):
        yield from _kunz_search(g, lo, hi, length)


def enumerate_gamma_prime(g: int, level: int) -> list[KunzTuple]:
    """Members of the family with genus ``g`` and coordinates in ``[level, 2*level+1]``."""
    if level < 1:
        raise ValueError("level must be >= 1")
    return list(enumerate_kunz(g, level, 2 * level + 1))


def in_gamma_prime(G: Gapset, level: int) -> bool:
    """Membership via level/depth: ``level <= λ(G) <= q(G) <= 2*level + 1``."""
    if G.genus == 0:
        return True
    return level <= G.level and G.depth <= 2 * level + 1


def count_n_prime(g: int, level: int, strategy: str = "kunz", jobs: int = 1,
                  budget: int | None = None) -> int:
    if g < 0:
        return 0
    if strategy == "kunz":
        return _band.band_counts(level, g, jobs=jobs, budget=budget)[g]
    if strategy == "gapset":
        return sum(1 for G in enumerate_gapsets(g) if in_gamma_prime(G, level))
    raise ValueError(f"unknown strategy {strategy!r}")


def n_prime_column(level: int, g_max: int, strategy: str = "kunz", jobs: int = 1,
                   budget: int | None = None) -> list[int]:
    """``[n'_{g,level} for g in 0..g_max]``."""
    if strategy == "kunz":
        return _band.band_counts(level, g_max, jobs=jobs, budget=budget)
    return [count_n_prime(g, level, strategy) for g in range(g_max + 1)]


# -- tables and cache -------------------------------------------------------

@dataclass
class CountTable:
    n_prime: dict[tuple[int, int], int] = field(default_factory=dict)
    n_full: dict[int, int] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "meta": self.meta,
            "n_prime": [[g, l, c] for (g, l), c in sorted(self.n_prime.items())],
            "n_full": [[g, c] for g, c in sorted(self.n_full.items())],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> CountTable:
        doc = json.loads(text)
        return cls(
            n_prime={(g, l): c for g, l, c in doc.get("n_prime", [])},
            n_full={g: c for g, c in doc.get("n_full", [])},
            meta=doc.get("meta", {}),
        )


def build_table(g_max: int, level_max: int, strategy: str = "kunz", jobs: int = 1,
                budget: int | None = None, cache: CountCache | None = None) -> CountTable:
    if g_max < 1 or level_max < 1:
        raise ValueError("g_max and level_max must be >= 1")
    table = CountTable(meta={"g_max": g_max, "l_max": level_max, "strategy": strategy})
    for level in range(1, level_max + 1):
        column = cached_column(level, g_max, strategy, jobs=jobs, budget=budget, cache=cache)
        for g in range(1, g_max + 1):
            table.n_prime[g, level] = column[g]
    return table


def cached_column(level: int, g_max: int, strategy: str = "kunz", jobs: int = 1,
                  budget: int | None = None, cache: CountCache | None = None) -> list[int]:
    if cache is not None:
        hit = cache.column(level, g_max, strategy)
        if hit is not None:
            return hit
    column = n_prime_column(level, g_max, strategy, jobs=jobs, budget=budget)
    if cache is not None:
        cache.store_column(level, column, strategy)
    return column


def default_cache_path() -> Path:
    env = os.environ.get("GAPSET_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "gapset" / "counts.json"


class CountCache:
    """Read-through/write-through JSON count cache.

    The file holds one ``CountTable`` document.  ``n_prime`` entries come
    from the Kunz strategy and ``n_full`` from the gapset tree; a file whose
    ``meta`` names another code version or strategy is ignored wholesale.
    """

    strategy = "kunz"

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else default_cache_path()
        self.table = CountTable(meta={"code_version": code_version(),
                                      "strategy": self.strategy})
        try:
            loaded = CountTable.from_json(self.path.read_text())
        except (OSError, ValueError, TypeError):
            return
        if loaded.meta == self.table.meta:
            self.table = loaded

    def column(self, level: int, g_max: int, strategy: str = "kunz") -> list[int] | None:
        t = self.table.n_prime
        if strategy != self.strategy:
            return None
        if all((g, level) in t for g in range(g_max + 1)):
            return [t[g, level] for g in range(g_max + 1)]
        return None

    def store_column(self, level: int, column: list[int], strategy: str = "kunz"):
        if strategy != self.strategy:
            return
        for g, c in enumerate(column):
            self.table.n_prime[g, level] = c
        self.save()

    def get_full(self, g: int) -> int | None:
        return self.table.n_full.get(g)

    def store_full(self, g: int, count: int):
        self.table.n_full[g] = count
        self.save()

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text(self.table.to_json())
        os.replace(tmp, self.path)

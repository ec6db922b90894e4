"""The coordinate maps behind the sandwich bounds on n'_{g,l}.

``extend_by_coordinate`` appends a coordinate ``z`` in ``[l, 2l]``; it sends
the family of genus ``g - z`` injectively into the family of genus ``g`` and
the images for different ``z`` are disjoint, which gives the lower bound.
``drop_last_coordinate`` removes the last coordinate; restricted to members
whose last coordinate is ``z`` it is injective into the family of genus
``g - z``, which gives the upper bound.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .core import (Gapset, GapsetError, InvalidKunzTupleError, KunzTuple, format_kunz,
                   gapset_from_kunz, kunz_violation)
from .enumeration import enumerate_gamma_prime, n_prime_column

DEFAULT_MAP_BUDGET = 250_000


class MapDomainError(GapsetError):
    pass


def _in_band(coords: KunzTuple, level: int) -> bool:
    return all(level <= k <= 2 * level + 1 for k in coords)


def extend_kunz(coords: KunzTuple, z: int, level: int) -> KunzTuple:
    """Coordinate form of ``extend_by_coordinate``; re-checks the Kunz system."""
    if not level <= z <= 2 * level:
        raise MapDomainError(f"appended coordinate {z} outside [{level}, {2 * level}]")
    if not _in_band(coords, level):
        raise MapDomainError(f"{format_kunz(coords)} has coordinates outside "
                             f"[{level}, {2 * level + 1}]")
    image = tuple(coords) + (z,)
    violation = kunz_violation(image)
    if violation is not None:
        raise InvalidKunzTupleError(image, violation)
    return image


def truncate_kunz(coords: KunzTuple, level: int) -> KunzTuple:
    """Coordinate form of ``drop_last_coordinate``; re-checks the Kunz system."""
    if not coords:
        raise MapDomainError("the empty tuple has no last coordinate")
    if not _in_band(coords, level):
        raise MapDomainError(f"{format_kunz(coords)} has coordinates outside "
                             f"[{level}, {2 * level + 1}]")
    image = tuple(coords[:-1])
    violation = kunz_violation(image)
    if violation is not None:
        raise InvalidKunzTupleError(image, violation)
    return image


def extend_by_coordinate(G: Gapset, z: int, level: int) -> Gapset:
    return gapset_from_kunz(extend_kunz(G.kunz(), z, level))


def drop_last_coordinate(G: Gapset, level: int) -> Gapset:
    return gapset_from_kunz(truncate_kunz(G.kunz(), level))


def partition_by_last_coordinate(g: int, level: int,
                                 members: list[KunzTuple] | None = None) -> dict[int, list[KunzTuple]]:
    if members is None:
        members = enumerate_gamma_prime(g, level)
    parts: dict[int, list[KunzTuple]] = {z: [] for z in range(level, 2 * level + 2)}
    for k in members:
        if k:
            parts[k[-1]].append(k)
    return parts


@dataclass
class VerificationReport:
    g: int
    l: int  # noqa: E741
    lower_lhs: int
    n: int
    upper_rhs: int
    lower_holds: bool
    upper_holds: bool
    map_checks: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if not (self.lower_holds and self.upper_holds):
            return "fail"
        if not self.map_checks.get("exhaustive"):
            return "budget_exceeded"
        return "pass" if self.map_checks.get("passed") else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> str:
        doc = asdict(self)
        doc["status"] = self.status
        return json.dumps(doc, sort_keys=False)


def _column_value(column: list[int], g: int) -> int:
    # negative genus contributes nothing; genus 0 is the empty gapset
    return column[g] if g >= 0 else 0


def _map_checks(g: int, level: int, n: int, column: list[int]) -> dict:
    checks = {
        "exhaustive": True,
        "extend_injective": True,
        "extend_images_disjoint": True,
        "extend_images_in_family": True,
        "truncate_injective": True,
        "truncate_images_in_family": True,
        "section_truncate_after_extend": True,
        "section_extend_after_truncate": True,
        "partition_complete": True,
        "enumeration_matches_count": True,
        "tuples_checked": 0,
    }
    failure = None

    def fail(name, detail):
        nonlocal failure
        checks[name] = False
        if failure is None:
            failure = {"check": name, **detail}

    target = enumerate_gamma_prime(g, level)
    target_set = set(target)
    if len(target) != n:
        fail("enumeration_matches_count", {"enumerated": len(target), "counted": n})
    checks["tuples_checked"] += len(target)

    all_images: set[KunzTuple] = set()
    for z in range(level, 2 * level + 1):
        if g - z < 0:
            continue
        domain = enumerate_gamma_prime(g - z, level)
        checks["tuples_checked"] += len(domain)
        images = set()
        for y in domain:
            try:
                x = extend_kunz(y, z, level)
            except GapsetError as exc:
                fail("extend_images_in_family", {"z": z, "tuple": format_kunz(y), "error": str(exc)})
                continue
            if sum(x) != g or not _in_band(x, level) or x not in target_set:
                fail("extend_images_in_family", {"z": z, "tuple": format_kunz(y),
                                                 "image": format_kunz(x)})
            if x in images:
                fail("extend_injective", {"z": z, "tuple": format_kunz(y), "image": format_kunz(x)})
            images.add(x)
            if x in all_images:
                fail("extend_images_disjoint", {"z": z, "image": format_kunz(x)})
            if truncate_kunz(x, level) != y:
                fail("section_truncate_after_extend", {"z": z, "tuple": format_kunz(y)})
        all_images |= images

    parts = partition_by_last_coordinate(g, level, target)
    if sum(len(v) for v in parts.values()) != n or any(
        k[-1] != z for z, v in parts.items() for k in v
    ):
        fail("partition_complete", {"sizes": {z: len(v) for z, v in parts.items()}})
    for z, members in parts.items():
        source = set(enumerate_gamma_prime(g - z, level)) if g - z >= 0 else set()
        images = set()
        for x in members:
            try:
                y = truncate_kunz(x, level)
            except GapsetError as exc:
                fail("truncate_images_in_family", {"z": z, "tuple": format_kunz(x), "error": str(exc)})
                continue
            if sum(y) != g - z or y not in source:
                fail("truncate_images_in_family", {"z": z, "tuple": format_kunz(x),
                                                   "image": format_kunz(y)})
            if y in images:
                fail("truncate_injective", {"z": z, "tuple": format_kunz(x), "image": format_kunz(y)})
            images.add(y)
            if z <= 2 * level and extend_kunz(y, z, level) != x:
                fail("section_extend_after_truncate", {"z": z, "tuple": format_kunz(x)})

    checks["passed"] = failure is None
    if failure is not None:
        checks["failure"] = failure
    return checks


def map_check_work(g: int, level: int, column: list[int]) -> int:
    """Number of tuples the exhaustive map checks touch at one cell."""
    work = _column_value(column, g)
    work += sum(_column_value(column, g - z) for z in range(level, 2 * level + 1))
    work += sum(_column_value(column, g - z) for z in range(level, 2 * level + 2))
    return work


def verify_theorem(g: int, level: int, column: list[int] | None = None,
                   map_budget: int | None = DEFAULT_MAP_BUDGET) -> VerificationReport:
    """Check both counting bounds at ``(g, level)`` and exercise the maps.

    ``column`` is ``[n'_{h,level} for h in 0..g]`` (computed when omitted).
    Map checks run only when their work fits in ``map_budget`` tuples; a
    skipped check is reported as not exhaustive rather than as passing.
    """
    if g < 1 or level < 1:
        raise ValueError("need g >= 1 and level >= 1")
    if column is None:
        column = n_prime_column(level, g)
    n = column[g]
    lower = sum(_column_value(column, g - i) for i in range(level, 2 * level + 1))
    upper = lower + _column_value(column, g - 2 * level - 1)
    report = VerificationReport(
        g=g, l=level, lower_lhs=lower, n=n, upper_rhs=upper,
        lower_holds=lower <= n, upper_holds=n <= upper,
    )
    work = map_check_work(g, level, column)
    if map_budget is not None and work > map_budget:
        report.map_checks = {"exhaustive": False, "passed": False,
                             "skipped": f"needs {work} tuples, budget {map_budget}"}
    else:
        report.map_checks = _map_checks(g, level, n, column)
    return report


def describe_maps(g: int, level: int) -> str:
    """Human-readable listing of both maps at one cell."""
    lines = [f"cell g={g} l={level}: n'={len(enumerate_gamma_prime(g, level))}"]
    for z in range(level, 2 * level + 1):
        lines.append(f"extend z={z}: family({g - z},{level}) -> family({g},{level})")
        domain = enumerate_gamma_prime(g - z, level) if g - z >= 0 else []
        if not domain:
            lines.append("  (empty)")
        for y in domain:
            lines.append(f"  {format_kunz(y)} |-> {format_kunz(extend_kunz(y, z, level))}")
    for z, members in partition_by_last_coordinate(g, level).items():
        lines.append(f"truncate z={z}: last coordinate {z} in family({g},{level}) "
                     f"-> family({g - z},{level})")
        if not members:
            lines.append("  (empty)")
        for x in members:
            lines.append(f"  {format_kunz(x)} |-> {format_kunz(truncate_kunz(x, level))}")
    return "\n".join(lines) + "\n"

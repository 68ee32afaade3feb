"""Brute-force ground truth.

Nothing here reuses propagator code: orderings are decided from explicitly
constructed listings, feasibility from direct formulas, and consistency by
enumerating complete assignments.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .engine import GuardExceeded, Model, solve_all
from .ordering import OrderingKind
from .symmetry import Linearization, SymmetryGroup, apply

ASSIGNMENT_GUARD = 1 << 22
GROUP_GUARD = 10_000


def _guard_group(group: SymmetryGroup) -> None:
    if len(group) > GROUP_GUARD:
        raise GuardExceeded(f"group has {len(group)} elements, guard is {GROUP_GUARD}")


# ---------------------------------------------------------------------------
# orderings by explicit listing


@lru_cache(maxsize=32)
def gray_listing(length: int, radix: int = 2) -> tuple[tuple[int, ...], ...]:
    """All words in reflected Gray order, built by the reflection rule."""
    if radix**length > ASSIGNMENT_GUARD:
        raise GuardExceeded(f"{radix}^{length} words exceeds the guard")
    words: list[tuple[int, ...]] = [()]
    for _ in range(length):
        words = [
            (d,) + w for d in range(radix) for w in (words if d % 2 == 0 else words[::-1])
        ]
    return tuple(words)


@lru_cache(maxsize=32)
def _gray_positions(length: int, radix: int) -> dict[tuple[int, ...], int]:
    return {w: i for i, w in enumerate(gray_listing(length, radix))}


def order_key(kind: OrderingKind, radix: int) -> Callable[[Sequence[int]], object]:
    """Sort key realizing the base ordering of ``kind``."""
    if kind.is_gray:
        return lambda w: _gray_positions(len(w), radix)[tuple(w)]
    return tuple


# ---------------------------------------------------------------------------
# orbits and canonical members


def orbit(a: Sequence[int], group: SymmetryGroup) -> set[tuple[int, ...]]:
    _guard_group(group)
    return {apply(s, a) for s in group}


def canonical_in_orbit(
    a: Sequence[int],
    group: SymmetryGroup,
    kind: OrderingKind,
    lin: Linearization,
    radix: int = 2,
) -> tuple[int, ...]:
    """Least orbit member under ``kind`` (greatest for anti kinds), reading
    each member through ``lin``."""
    key = order_key(kind, radix)
    members = sorted(orbit(a, group), key=lambda b: key([b[p] for p in lin.order]))
    return members[-1] if kind.is_anti else members[0]


def orbits(solutions: Iterable[Sequence[int]], group: SymmetryGroup) -> list[list[tuple[int, ...]]]:
    """Partition ``solutions`` into orbits, in order of first appearance."""
    _guard_group(group)
    seen: dict[tuple[int, ...], int] = {}
    parts: list[list[tuple[int, ...]]] = []
    pool = [tuple(a) for a in solutions]
    members = set(pool)
    for a in pool:
        if a in seen:
            continue
        idx = len(parts)
        orb = sorted(b for b in orbit(a, group) if b in members)
        for b in orb:
            seen[b] = idx
        parts.append(orb)
    return parts


# ---------------------------------------------------------------------------
# domain consistency by enumeration


def dc_closure(
    check: Callable[[Sequence[int]], bool], domains: Sequence[Iterable[int]]
) -> list[set[int]] | None:
    """Keep each value that extends to a satisfying complete assignment.

    Returns None when nothing satisfies ``check``.
    """
    doms = [sorted(set(d)) for d in domains]
    if math.prod(len(d) for d in doms) > ASSIGNMENT_GUARD:
        raise GuardExceeded("domain product exceeds the guard")
    kept: list[set[int]] = [set() for _ in doms]
    for a in itertools.product(*doms):
        if check(a):
            for i, v in enumerate(a):
                kept[i].add(v)
    if not kept or any(not k for k in kept):
        return None if doms else []
    return kept


def gray_leq(x: Sequence[int], y: Sequence[int], radix: int = 2) -> bool:
    pos = _gray_positions(len(x), radix)
    return pos[tuple(x)] <= pos[tuple(y)]


def lex_leq(x: Sequence[int], y: Sequence[int]) -> bool:
    return tuple(x) <= tuple(y)


# ---------------------------------------------------------------------------
# direct checkers


def still_life_check(board: Sequence[Sequence[int]]) -> tuple[bool, int]:
    """Stability of an n by n pattern on the infinite plane (outside dead)."""
    n = len(board)

    def alive(r: int, c: int) -> int:
        return board[r][c] if 0 <= r < n and 0 <= c < n else 0

    for r in range(-1, n + 1):
        for c in range(-1, n + 1):
            live = sum(
                alive(r + dr, c + dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if dr or dc
            )
            if alive(r, c):
                if live not in (2, 3):
                    return False, 0
            elif live == 3:
                return False, 0
    return True, sum(map(sum, board))


def labs_correlations(seq: Sequence[int]) -> list[int]:
    """Aperiodic autocorrelations C_1..C_{n-1} with 0 -> +1, 1 -> -1."""
    a = [1 - 2 * v for v in seq]
    n = len(a)
    return [sum(a[i] * a[i + k] for i in range(n - k)) for k in range(1, n)]


def labs_energy(seq: Sequence[int]) -> int:
    return sum(c * c for c in labs_correlations(seq))


def queens_check(board: Sequence[Sequence[int]]) -> tuple[bool, int]:
    """No line holds both colours, and the armies are the same size."""
    n = len(board)
    lines: list[list[tuple[int, int]]] = []
    lines += [[(r, c) for c in range(n)] for r in range(n)]
    lines += [[(r, c) for r in range(n)] for c in range(n)]
    for d in range(-(n - 1), n):
        lines.append([(r, r - d) for r in range(n) if 0 <= r - d < n])
    for s in range(2 * n - 1):
        lines.append([(r, s - r) for r in range(n) if 0 <= s - r < n])
    for line in lines:
        colours = {board[r][c] for r, c in line}
        if 1 in colours and 2 in colours:
            return False, 0
    whites = sum(v == 1 for row in board for v in row)
    blacks = sum(v == 2 for row in board for v in row)
    if whites != blacks:
        return False, 0
    return True, whites


def _square(flat: Sequence[int], n: int) -> list[list[int]]:
    return [list(flat[r * n : (r + 1) * n]) for r in range(n)]


def direct_check(model_kind: str, assignment: Sequence[int]) -> tuple[bool, int]:
    """Feasibility and objective of a decision-vector assignment."""
    if model_kind == "still-life":
        n = math.isqrt(len(assignment))
        return still_life_check(_square(assignment, n))
    if model_kind == "labs":
        return True, labs_energy(assignment)
    if model_kind == "queens-armies":
        n = math.isqrt(len(assignment))
        return queens_check(_square(assignment, n))
    raise ValueError(f"unknown model kind {model_kind!r}")


def queens_optimum(n: int) -> int:
    """Largest equal army size, enumerating only the white placements.

    Given white cells W, black may use any cell not sharing a line with W,
    so the best equal size for W is ``min(|W|, |safe(W)|)``.
    """
    cells = [(r, c) for r in range(n) for c in range(n)]
    if 2 ** len(cells) > ASSIGNMENT_GUARD:
        raise GuardExceeded(f"2^{len(cells)} white placements exceeds the guard")

    def shares_line(a, b):
        return a[0] == b[0] or a[1] == b[1] or abs(a[0] - b[0]) == abs(a[1] - b[1])

    reach = []
    for a in cells:
        m = 0
        for j, b in enumerate(cells):
            if shares_line(a, b):
                m |= 1 << j
        reach.append(m)
    full = (1 << len(cells)) - 1
    best = 0
    for w in range(1 << len(cells)):
        attacked = 0
        for i in range(len(cells)):
            if w >> i & 1:
                attacked |= reach[i]
        best = max(best, min(bin(w).count("1"), bin(full & ~attacked).count("1")))
    return best


def brute_force(model_kind: str, n: int) -> tuple[int, list[tuple[int, ...]]]:
    """Optimum and all feasible decision assignments, by enumeration."""
    if model_kind == "labs":
        cells, radix, best = n, 2, min
    elif model_kind == "still-life":
        cells, radix, best = n * n, 2, max
    elif model_kind == "queens-armies":
        cells, radix, best = n * n, 3, max
    else:
        raise ValueError(f"unknown model kind {model_kind!r}")
    if radix**cells > ASSIGNMENT_GUARD:
        raise GuardExceeded(f"{radix}^{cells} assignments exceeds the guard")
    feasible, values = [], []
    for a in itertools.product(range(radix), repeat=cells):
        ok, val = direct_check(model_kind, a)
        if ok:
            feasible.append(a)
            values.append(val)
    return best(values), feasible


# ---------------------------------------------------------------------------
# sound / complete verification


@dataclass
class OrbitReport:
    orbit_count: int
    orbit_sizes: list[int]
    survivors_per_orbit: list[int]
    canonical_mismatches: list[tuple[int, ...]] = field(default_factory=list)
    unsound_orbits: list[tuple[int, ...]] = field(default_factory=list)
    leader: bool = False

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.survivors_per_orbit).items()))

    @property
    def sound(self) -> bool:
        return not self.unsound_orbits

    @property
    def complete(self) -> bool:
        return all(s <= 1 for s in self.survivors_per_orbit)

    @property
    def passed(self) -> bool:
        if not self.sound:
            return False
        return not self.leader or (self.complete and not self.canonical_mismatches)

    def as_dict(self) -> dict:
        return {
            "orbit_count": self.orbit_count,
            "solutions": sum(self.orbit_sizes),
            "survivors": sum(self.survivors_per_orbit),
            "survivor_histogram": {str(k): v for k, v in self.histogram.items()},
            "sound": self.sound,
            "complete": self.complete,
            "canonical_mismatches": len(self.canonical_mismatches),
            "passed": self.passed,
            "first_counterexample": self.first_counterexample(),
        }

    def first_counterexample(self) -> list[int] | None:
        if self.unsound_orbits:
            return list(self.unsound_orbits[0])
        if self.canonical_mismatches:
            return list(self.canonical_mismatches[0])
        return None


def _project(model: Model, sols: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    return [tuple(s[x] for x in model.decision) for s in sols]


def verify_sound_complete(
    model: Model,
    group: SymmetryGroup,
    breaking: Callable[[Model], Model],
    leader: tuple[OrderingKind, Linearization] | None = None,
    node_budget: int | None = 1_000_000,
) -> OrbitReport:
    """Count survivors of ``breaking`` in each orbit of the model's solutions.

    ``breaking`` receives a copy of ``model`` and posts its constraints.
    With ``leader`` given, every survivor must also be the canonical member
    of its orbit.
    """
    _guard_group(group)
    product = math.prod(bin(model.domains[x]).count("1") for x in model.decision)
    if product > ASSIGNMENT_GUARD:
        raise GuardExceeded(f"{product} decision assignments exceeds the guard")
    base, _ = solve_all(model, node_budget=node_budget)
    base_proj = _project(model, base)
    parts = orbits(base_proj, group)
    where = {a: i for i, part in enumerate(parts) for a in part}
    broken = breaking(model.copy())
    kept, _ = solve_all(broken, node_budget=node_budget)
    kept_proj = _project(broken, kept)
    survivors = [0] * len(parts)
    mismatches = []
    for a in kept_proj:
        survivors[where[a]] += 1
        if leader is not None:
            kind, lin = leader
            if canonical_in_orbit(a, group, kind, lin, model.radix) != a:
                mismatches.append(a)
    unsound = [parts[i][0] for i, s in enumerate(survivors) if s == 0]
    return OrbitReport(
        orbit_count=len(parts),
        orbit_sizes=[len(p) for p in parts],
        survivors_per_orbit=survivors,
        canonical_mismatches=mismatches,
        unsound_orbits=unsound,
        leader=leader is not None,
    )

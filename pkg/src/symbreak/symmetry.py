"""Symmetry groups of the benchmark problems and the constraints that break them.

Symmetries act on the model's decision vector (positions ``0..N-1``).  A
symmetry is a position permutation plus a value bijection per source
position; applying it to an assignment ``a`` gives
``b[i] = value_map[p](a[p])`` with ``p = perm[i]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .engine import GuardExceeded, Model, ModelError
from .ordering import OrderingKind, View, lex_leq_propagator, ordering_leq_propagator


@dataclass(frozen=True)
class Symmetry:
    perm: tuple[int, ...]
    value_maps: tuple[tuple[int, ...] | None, ...]
    name: str = ""

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation")
        if len(self.value_maps) != len(self.perm):
            raise ValueError("need one value map per position")
        for vm in self.value_maps:
            if vm is not None and sorted(vm) != list(range(len(vm))):
                raise ValueError("value map is not a bijection")

    @classmethod
    def identity(cls, n: int) -> "Symmetry":
        return cls(tuple(range(n)), (None,) * n, "id")

    @property
    def size(self) -> int:
        return len(self.perm)

    def key(self) -> tuple:
        """Canonical form for equality tests (identity maps normalized)."""
        maps = tuple(
            None if vm is None or list(vm) == list(range(len(vm))) else tuple(vm)
            for vm in self.value_maps
        )
        return self.perm, maps

    def is_identity(self) -> bool:
        perm, maps = self.key()
        return perm == tuple(range(self.size)) and all(m is None for m in maps)

    def inverse(self) -> "Symmetry":
        n = self.size
        inv = [0] * n
        for i, p in enumerate(self.perm):
            inv[p] = i
        maps: list = [None] * n
        for j in range(n):
            vm = self.value_maps[self.perm[j]]
            if vm is not None:
                back = [0] * len(vm)
                for v, w in enumerate(vm):
                    back[w] = v
                maps[j] = tuple(back)
        return Symmetry(tuple(inv), tuple(maps), f"{self.name}^-1")


def _compose_maps(outer, inner):
    if outer is None:
        return inner
    if inner is None:
        return outer
    return tuple(outer[v] for v in inner)


def compose(s: Symmetry, t: Symmetry) -> Symmetry:
    """Symmetry with ``apply(compose(s, t), a) == apply(s, apply(t, a))``."""
    n = s.size
    perm = tuple(t.perm[s.perm[i]] for i in range(n))
    maps: list = [None] * n
    for i in range(n):
        j = perm[i]
        maps[j] = _compose_maps(s.value_maps[s.perm[i]], t.value_maps[j])
    return Symmetry(perm, tuple(maps), f"{s.name}*{t.name}")


def apply(s: Symmetry, a: Sequence[int]) -> tuple[int, ...]:
    out = []
    for p in s.perm:
        vm = s.value_maps[p]
        out.append(a[p] if vm is None else vm[a[p]])
    return tuple(out)


@dataclass
class SymmetryGroup:
    elements: list[Symmetry]
    name: str = ""

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def non_identity(self) -> list[Symmetry]:
        return [s for s in self.elements if not s.is_identity()]


def _dedupe(elements: list[Symmetry]) -> list[Symmetry]:
    seen, out = set(), []
    for s in elements:
        k = s.key()
        if k not in seen:
            seen.add(k)
            out.append(s)
    return out


def _cell_perm(n: int, m: int, f) -> tuple[int, ...]:
    # image position i reads source f(r, c)
    perm = []
    for r in range(n):
        for c in range(m):
            sr, sc = f(r, c)
            perm.append(sr * m + sc)
    return tuple(perm)


_SQUARE = {
    "id": lambda n: lambda r, c: (r, c),
    "rot90": lambda n: lambda r, c: (n - 1 - c, r),
    "rot180": lambda n: lambda r, c: (n - 1 - r, n - 1 - c),
    "rot270": lambda n: lambda r, c: (c, n - 1 - r),
    "flip-h": lambda n: lambda r, c: (r, n - 1 - c),
    "flip-v": lambda n: lambda r, c: (n - 1 - r, c),
    "transpose": lambda n: lambda r, c: (c, r),
    "anti-transpose": lambda n: lambda r, c: (n - 1 - c, n - 1 - r),
}


def square_symmetries(n: int) -> SymmetryGroup:
    """Rotations and reflections of an ``n`` by ``n`` board (8 elements)."""
    if n < 1:
        raise ValueError("board side must be positive")
    elems = [
        Symmetry(_cell_perm(n, n, f(n)), (None,) * (n * n), name)
        for name, f in _SQUARE.items()
    ]
    return SymmetryGroup(elems, f"square({n})")


def labs_symmetries(n: int) -> SymmetryGroup:
    """Reversal and bit inversions of a length-``n`` 0/1 sequence.

    "Even" positions are 1-based, i.e. indices 1, 3, 5, ... of the vector.
    """
    if n < 1:
        raise ValueError("sequence length must be positive")
    flip = (1, 0)
    inversions = {
        "": (),
        "inv": tuple(range(n)),
        "inv-even": tuple(range(1, n, 2)),
        "inv-odd": tuple(range(0, n, 2)),
    }
    elems = []
    for rev in (False, True):
        perm = tuple(range(n - 1, -1, -1)) if rev else tuple(range(n))
        for label, flipped in inversions.items():
            maps = tuple(flip if i in flipped else None for i in range(n))
            name = "+".join(x for x in ("rev" if rev else "", label) if x) or "id"
            elems.append(Symmetry(perm, maps, name))
    return SymmetryGroup(_dedupe(elems), f"labs({n})")


def queens_symmetries(n: int) -> SymmetryGroup:
    """Square symmetries combined with swapping the two colours (16 elements)."""
    swap = (0, 2, 1)
    elems = []
    for s in square_symmetries(n):
        elems.append(s)
        elems.append(Symmetry(s.perm, (swap,) * (n * n), s.name + "+swap"))
    return SymmetryGroup(_dedupe(elems), f"queens({n})")


ROWCOL_GUARD = 10_000


def rowcol_symmetries(n: int, m: int, guard: int = ROWCOL_GUARD) -> SymmetryGroup:
    """All row and column permutations of an ``n`` by ``m`` matrix."""
    size = math.factorial(n) * math.factorial(m)
    if size > guard:
        raise GuardExceeded(f"row/column group has {size} elements, guard is {guard}")
    elems = []
    for rp in itertools.permutations(range(n)):
        for cp in itertools.permutations(range(m)):
            perm = _cell_perm(n, m, lambda r, c: (rp[r], cp[c]))
            elems.append(Symmetry(perm, (None,) * (n * m), f"r{rp}c{cp}"))
    return SymmetryGroup(elems, f"rowcol({n}x{m})")


# ---------------------------------------------------------------------------
# linearizations


MATRIX_SCHEMES = ("row", "col", "snake", "col-snake", "spiral-in", "spiral-out")
SEQUENCE_SCHEMES = ("left2right", "right2left", "outside-in", "inside-out")
SCHEME_ALIASES = {"spiral": "spiral-in", "rev": "right2left", "l2r": "left2right"}


@dataclass(frozen=True)
class Linearization:
    scheme: str
    order: tuple[int, ...]


def _spiral(n: int, m: int) -> list[int]:
    out = []
    top, bottom, left, right = 0, n - 1, 0, m - 1
    while top <= bottom and left <= right:
        out += [top * m + c for c in range(left, right + 1)]
        out += [r * m + right for r in range(top + 1, bottom + 1)]
        if top < bottom:
            out += [bottom * m + c for c in range(right - 1, left - 1, -1)]
        if left < right:
            out += [r * m + left for r in range(bottom - 1, top, -1)]
        top, bottom, left, right = top + 1, bottom - 1, left + 1, right - 1
    return out


def _outside_in(n: int) -> list[int]:
    out = []
    lo, hi = 0, n - 1
    while lo <= hi:
        out.append(lo)
        if hi != lo:
            out.append(hi)
        lo, hi = lo + 1, hi - 1
    return out


def linearize(shape: Sequence[int], scheme: str) -> Linearization:
    """Order the cells of a matrix ``(n, m)`` or a sequence ``(n,)``."""
    scheme = SCHEME_ALIASES.get(scheme, scheme)
    if len(shape) == 2:
        n, m = shape
        if scheme == "row":
            order = list(range(n * m))
        elif scheme == "col":
            order = [r * m + c for c in range(m) for r in range(n)]
        elif scheme == "snake":
            order = [
                r * m + (c if r % 2 == 0 else m - 1 - c) for r in range(n) for c in range(m)
            ]
        elif scheme == "col-snake":
            order = [
                (r if c % 2 == 0 else n - 1 - r) * m + c for c in range(m) for r in range(n)
            ]
        elif scheme == "spiral-in":
            order = _spiral(n, m)
        elif scheme == "spiral-out":
            order = _spiral(n, m)[::-1]
        else:
            raise ModelError(f"scheme {scheme!r} does not apply to a matrix")
    elif len(shape) == 1:
        (n,) = shape
        if scheme == "left2right":
            order = list(range(n))
        elif scheme == "right2left":
            order = list(range(n - 1, -1, -1))
        elif scheme == "outside-in":
            order = _outside_in(n)
        elif scheme == "inside-out":
            order = _outside_in(n)[::-1]
        else:
            raise ModelError(f"scheme {scheme!r} does not apply to a sequence")
    else:
        raise ModelError(f"unsupported shape {tuple(shape)}")
    return Linearization(scheme, tuple(order))


# ---------------------------------------------------------------------------
# symmetry-breaking constraint generation


def leader_vectors(model: Model, sym: Symmetry, lin: Linearization):
    """The pair (vec, sym(vec)) of views, both read through ``lin``."""
    dec = model.decision
    xs = [View(dec[p]) for p in lin.order]
    ys = []
    for p in lin.order:
        src = sym.perm[p]
        ys.append(View(dec[src], sym.value_maps[src]))
    return xs, ys


def post_leader_constraints(
    model: Model,
    group: SymmetryGroup,
    kind: OrderingKind,
    lin: Linearization,
    strict: bool = False,
) -> Model:
    """Post ``vec <=_kind sym(vec)`` for every non-identity symmetry."""
    n = len(model.decision)
    if sorted(lin.order) != list(range(n)):
        raise ModelError("linearization does not cover the decision variables")
    limit = 1 << model.radix
    for x in model.decision:
        if model.domains[x] >= limit:
            raise ModelError(f"domain of {model.names[x]} exceeds radix {model.radix}")
    for s in group.non_identity():
        if s.size != n:
            raise ModelError("symmetry size does not match the decision vector")
        xs, ys = leader_vectors(model, s, lin)
        model.post(ordering_leq_propagator(kind, xs, ys, radix=model.radix, strict=strict))
    return model


def _matrix_vars(model: Model) -> list[list[int]]:
    if model.shape is None or len(model.shape) != 2:
        raise ModelError("model has no matrix shape")
    n, m = model.shape
    dec = model.decision
    return [[dec[r * m + c] for c in range(m)] for r in range(n)]


def post_doublelex(model: Model) -> Model:
    """Lex-order adjacent rows and adjacent columns."""
    mat = _matrix_vars(model)
    n, m = len(mat), len(mat[0])
    for r in range(n - 1):
        model.post(lex_leq_propagator(mat[r], mat[r + 1], radix=model.radix))
    for c in range(m - 1):
        model.post(
            lex_leq_propagator(
                [mat[r][c] for r in range(n)], [mat[r][c + 1] for r in range(n)], radix=model.radix
            )
        )
    return model


def snakelex_pairs(mat: Sequence[Sequence[int]]) -> list[tuple[list[int], list[int]]]:
    """Vector pairs of the columnwise SnakeLex decomposition.

    Column ``i`` is compared with columns ``i+1`` and ``i+2``, both read in
    column ``i``'s snake direction (down for even 0-based ``i``, up for odd).
    Rows ``i`` and ``i+1`` are compared intertwined: the left vector takes
    row ``i`` in down-columns and row ``i+1`` in up-columns, the right vector
    the other way round.
    """
    n, m = len(mat), len(mat[0])
    pairs = []
    for i in range(m - 1):
        rows = range(n) if i % 2 == 0 else range(n - 1, -1, -1)
        for j in (i + 1, i + 2):
            if j < m:
                pairs.append(([mat[r][i] for r in rows], [mat[r][j] for r in rows]))
    for r in range(n - 1):
        left = [mat[r if c % 2 == 0 else r + 1][c] for c in range(m)]
        right = [mat[r + 1 if c % 2 == 0 else r][c] for c in range(m)]
        pairs.append((left, right))
    return pairs


def post_snakelex(model: Model, variant: str = "columnwise") -> Model:
    mat = _matrix_vars(model)
    if variant == "rowwise":
        mat = [list(col) for col in zip(*mat)]
    elif variant != "columnwise":
        raise ModelError(f"unknown SnakeLex variant {variant!r}")
    for xs, ys in snakelex_pairs(mat):
        model.post(lex_leq_propagator(xs, ys, radix=model.radix))
    return model

"""Builders for the three benchmark optimization problems."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .engine import Indicator, Linear, Model, Table


@lru_cache(maxsize=None)
def _life_table(num_neighbours: int) -> tuple[tuple[int, ...], ...]:
    # (cell, neighbours...): live needs 2-3 live neighbours, dead must not have 3
    rows = []
    for t in itertools.product((0, 1), repeat=num_neighbours + 1):
        s = sum(t[1:])
        if (t[0] == 1 and s in (2, 3)) or (t[0] == 0 and s != 3):
            rows.append(t)
    return tuple(rows)


def build_still_life(n: int) -> Model:
    """Maximum density still life on an ``n`` by ``n`` board.

    The board sits in an ``(n+2)`` square grid whose border is fixed dead;
    every grid cell, border included, gets a stability table over itself and
    its in-grid neighbours.
    """
    if n < 1:
        raise ValueError("board side must be positive")
    size = n + 2
    model = Model(name=f"still-life-{n}", shape=(n, n), radix=2)
    grid = [[0] * size for _ in range(size)]
    for r in range(size):
        for c in range(size):
            border = r in (0, size - 1) or c in (0, size - 1)
            grid[r][c] = model.new_var((0,) if border else (0, 1), f"g{r}_{c}")
    for r in range(size):
        for c in range(size):
            nbrs = [
                grid[r + dr][c + dc]
                for dr in (-1, 0, 1)
                for dc in (-1, 0, 1)
                if (dr or dc) and 0 <= r + dr < size and 0 <= c + dc < size
            ]
            model.post(Table([grid[r][c]] + nbrs, _life_table(len(nbrs))))
    model.decision = [grid[r][c] for r in range(1, n + 1) for c in range(1, n + 1)]
    obj = model.new_var(range(n * n + 1), "live")
    model.post(Linear([(1, x) for x in model.decision] + [(-1, obj)], "==", 0))
    model.set_objective(obj, "max")
    return model


def build_labs(n: int) -> Model:
    """Low autocorrelation binary sequence of length ``n``.

    ``s_i = 0`` stands for +1 and ``s_i = 1`` for -1.  ``t[k][i]`` is 1 iff
    ``s_i != s_{i+k}``, so the k-th correlation is ``(n-k) - 2*sum_i t[k][i]``.
    The objective is the sum of squared correlations.
    """
    if n < 2:
        raise ValueError("sequence length must be at least 2")
    model = Model(name=f"labs-{n}", shape=(n,), radix=2)
    s = [model.new_var((0, 1), f"s{i + 1}") for i in range(n)]
    model.decision = list(s)
    xor = [(a, b, a ^ b) for a in (0, 1) for b in (0, 1)]
    squares = []
    for k in range(1, n):
        t = [model.new_var((0, 1), f"t{k}_{i + 1}") for i in range(n - k)]
        for i in range(n - k):
            model.post(Table([s[i], s[i + k], t[i]], xor))
        cnt = model.new_var(range(n - k + 1), f"d{k}")
        model.post(Linear([(1, x) for x in t] + [(-1, cnt)], "==", 0))
        sq_vals = {((n - k) - 2 * d) ** 2 for d in range(n - k + 1)}
        sq = model.new_var(sorted(sq_vals), f"c{k}sq")
        model.post(Table([cnt, sq], [(d, ((n - k) - 2 * d) ** 2) for d in range(n - k + 1)]))
        squares.append(sq)
    top = sum((n - k) ** 2 for k in range(1, n))
    energy = model.new_var(range(top + 1), "energy")
    model.post(Linear([(1, q) for q in squares] + [(-1, energy)], "==", 0))
    model.set_objective(energy, "min")
    return model


def attacking_pairs(n: int) -> list[tuple[int, int]]:
    """Unordered pairs of cells sharing a row, column or diagonal."""
    cells = [(r, c) for r in range(n) for c in range(n)]
    out = []
    for a, (r1, c1) in enumerate(cells):
        for b in range(a + 1, len(cells)):
            r2, c2 = cells[b]
            if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
                out.append((a, b))
    return out


def build_queens_armies(n: int) -> Model:
    """Peaceable armies: 0 empty, 1 white queen, 2 black queen; maximize
    the white army subject to equal army sizes."""
    if n < 1:
        raise ValueError("board side must be positive")
    model = Model(name=f"queens-armies-{n}", shape=(n, n), radix=3)
    x = [model.new_var((0, 1, 2), f"q{r}_{c}") for r in range(n) for c in range(n)]
    model.decision = list(x)
    peaceful = [(a, b) for a in range(3) for b in range(3) if {a, b} != {1, 2}]
    for a, b in attacking_pairs(n):
        model.post(Table([x[a], x[b]], peaceful))
    white = [model.new_var((0, 1), f"w{i}") for i in range(n * n)]
    black = [model.new_var((0, 1), f"b{i}") for i in range(n * n)]
    for i in range(n * n):
        model.post(Indicator(white[i], x[i], 1))
        model.post(Indicator(black[i], x[i], 2))
    nw = model.new_var(range(n * n + 1), "whites")
    nb = model.new_var(range(n * n + 1), "blacks")
    model.post(Linear([(1, w) for w in white] + [(-1, nw)], "==", 0))
    model.post(Linear([(1, b) for b in black] + [(-1, nb)], "==", 0))
    model.post(Linear([(1, nw), (-1, nb)], "==", 0))
    model.set_objective(nw, "max")
    return model


def build_free_matrix(n: int, m: int, radix: int = 2) -> Model:
    """Unconstrained ``n`` by ``m`` matrix, used for symmetry-breaking checks."""
    model = Model(name=f"matrix-{n}x{m}", shape=(n, m), radix=radix)
    model.decision = [
        model.new_var(range(radix), f"m{r}_{c}") for r in range(n) for c in range(m)
    ]
    return model


BUILDERS = {
    "still-life": build_still_life,
    "labs": build_labs,
    "queens-armies": build_queens_armies,
}
